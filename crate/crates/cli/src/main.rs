//! Batch front end: load states, run the channels or the atlas, write CSV/JSON.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 malformed state
//! file, 3 quadrature failure, 4 unwritable output path.

mod manifest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use fermi_persist::adc::{adc_series, ADCParams};
use fermi_persist::bath::{BathCache, BathParams, Beta};
use fermi_persist::dephasing::{
    asymptotic_coherence, asymptotic_concurrence, evolve_series, persistence, Spacing, TimeGrid,
};
use fermi_persist::io::{read_state_file, write_adc_csv, write_atlas_csv, write_trajectory_csv, LoadedState};
use fermi_persist::sampling::{run_atlas, AtlasSummary, SamplerConfig};
use fermi_persist::state::{AUTO_RENORM_TOL, DEFAULT_CLASSIFY_TOL};
use fermi_persist::{classify_subspace, concurrence_pure, density_from_pure, Error};
use serde_json::json;

use manifest::{manifest_path, RunManifest};

/// Sets the worker-thread count; unset means one per core.
const THREADS_ENV: &str = "FERMI_PERSIST_THREADS";

#[derive(Parser)]
#[command(name = "fermi-persist", version, about = "Decoherence and entanglement persistence of two fermions with four levels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time series of Cf, K, SvN and purity under a channel.
    Evolve(EvolveArgs),
    /// Long-time coherence, concurrence, persistence and subspace label.
    Asymptotic(StateArgs),
    /// Monte-Carlo atlas over the (x, y, z) tetrahedron.
    Sample(SampleArgs),
    /// Prints DFS, ED24, ED15, FamilyI or Generic.
    Classify(ClassifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Channel {
    Dephasing,
    Adc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridSpacing {
    Linear,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct BetaArg(Beta<f64>);

impl FromStr for BetaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "zero-temperature" {
            return Ok(BetaArg(Beta::ZeroTemperature));
        }
        match s.parse::<f64>() {
            Ok(b) if b > 0.0 && b.is_finite() => Ok(BetaArg(Beta::Finite(b))),
            _ => Err(format!("expected a positive number or `zero-temperature`, got `{s}`")),
        }
    }
}

impl BetaArg {
    fn label(&self) -> serde_json::Value {
        match self.0 {
            Beta::Finite(b) => json!(b),
            Beta::ZeroTemperature => json!("zero-temperature"),
        }
    }
}

#[derive(clap::Args)]
struct StateArgs {
    /// State file: {"basis": "angmom"|"slater", "amplitudes": [[re, im] x 6]}.
    #[arg(long)]
    state: PathBuf,
    /// Write the result here (plus a manifest) instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: StateArgs,
    /// Amplitudes with modulus at or below this count as absent.
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
    tol: f64,
}

#[derive(clap::Args)]
struct EvolveArgs {
    #[command(flatten)]
    input: StateArgs,
    #[arg(long, value_enum, default_value_t = Channel::Dephasing)]
    channel: Channel,
    /// Dimensionless bath coupling.
    #[arg(long, default_value_t = 8.0)]
    j0: f64,
    /// Bath cutoff frequency; times are in units of its inverse.
    #[arg(long = "omega-c", default_value_t = 1.0)]
    omega_c: f64,
    /// Inverse temperature in units of 1/omega_c, or `zero-temperature`.
    #[arg(long, default_value = "10")]
    beta: BetaArg,
    #[arg(long = "quad-rel-tol", default_value_t = 1e-10)]
    quad_rel_tol: f64,
    /// Scale Gamma, Delta and Theta by the 4*J0 spectral-density prefactor.
    #[arg(long = "strict-spectral-density")]
    strict_spectral_density: bool,
    /// Damping rate for the amplitude-damping channel, p(t) = 1 - exp(-rate*t).
    #[arg(long = "gamma-rate", default_value_t = 1.0)]
    gamma_rate: f64,
    #[arg(long = "t-min", default_value_t = 0.0)]
    t_min: f64,
    #[arg(long = "t-max", default_value_t = 30.0)]
    t_max: f64,
    #[arg(long, default_value_t = 300)]
    points: usize,
    #[arg(long, value_enum, default_value_t = GridSpacing::Linear)]
    spacing: GridSpacing,
}

#[derive(clap::Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep draws with alpha_3 < alpha_6 instead of swapping them.
    #[arg(long = "no-enforce-order")]
    no_enforce_order: bool,
    /// Atlas CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Summary JSON path; defaults to the CSV path with `.summary.json` appended.
    #[arg(long)]
    summary: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Malformed(String),
    Quadrature(String),
    Unwritable(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Malformed(_) => 2,
            Failure::Quadrature(_) => 3,
            Failure::Unwritable(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Malformed(m) | Failure::Quadrature(m) | Failure::Unwritable(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedState(_) => Failure::Malformed(e.to_string()),
            Error::QuadratureFailure { .. } => Failure::Quadrature(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn load_state(path: &Path) -> Result<LoadedState, Failure> {
    let loaded = read_state_file(path)?;
    if loaded.norm_deviation > AUTO_RENORM_TOL {
        eprintln!(
            "warning: {} has norm off by {:.3e}; amplitudes were renormalised",
            path.display(),
            loaded.norm_deviation
        );
    }
    Ok(loaded)
}

fn write_file(path: &Path, bytes: &[u8]) -> CmdResult {
    std::fs::write(path, bytes).map_err(|e| Failure::Unwritable(format!("cannot write {}: {e}", path.display())))
}

/// Writes each `(path, bytes)` pair and a manifest beside the first one.
fn emit(mut manifest: RunManifest, files: &[(&Path, Vec<u8>)]) -> CmdResult {
    for (path, bytes) in files {
        write_file(path, bytes)?;
        manifest.record(path, bytes);
    }
    write_file(&manifest_path(files[0].0), &manifest.to_bytes())
}

fn input_params(path: &Path) -> serde_json::Value {
    let bytes = std::fs::read(path).unwrap_or_default();
    json!({ "path": path.display().to_string(), "sha256": manifest::sha256_hex(&bytes) })
}

fn cmd_evolve(args: &EvolveArgs) -> CmdResult {
    let loaded = load_state(&args.input.state)?;
    let grid = TimeGrid {
        t_min: args.t_min,
        t_max: args.t_max,
        count: args.points,
        spacing: match args.spacing {
            GridSpacing::Linear => Spacing::Linear,
            GridSpacing::Log => Spacing::Log,
        },
    };
    let times = grid.points()?;
    let rho0 = density_from_pure(&loaded.state);
    let mut csv = Vec::new();
    let io_err = |e: std::io::Error| Failure::Unwritable(e.to_string());
    let channel_params = match args.channel {
        Channel::Dephasing => {
            let mut bath = BathParams::new(args.j0, args.omega_c, args.beta.0)?;
            bath.quad_rel_tol = args.quad_rel_tol;
            bath.strict_spectral_density = args.strict_spectral_density;
            let cache = BathCache::new(bath)?;
            write_trajectory_csv(&mut csv, &evolve_series(&rho0, &times, &cache)?).map_err(io_err)?;
            json!({
                "channel": "dephasing",
                "j0": args.j0,
                "omega_c": args.omega_c,
                "beta": args.beta.label(),
                "quad_rel_tol": args.quad_rel_tol,
                "strict_spectral_density": args.strict_spectral_density,
            })
        }
        Channel::Adc => {
            let adc = ADCParams::Rate(args.gamma_rate);
            write_adc_csv(&mut csv, &adc_series(&rho0, &times, &adc)?).map_err(io_err)?;
            json!({ "channel": "adc", "gamma_rate": args.gamma_rate })
        }
    };
    let Some(out) = &args.input.out else {
        print!("{}", String::from_utf8_lossy(&csv));
        return Ok(());
    };
    let params = json!({
        "state": input_params(&args.input.state),
        "channel": channel_params,
        "grid": grid,
    });
    emit(RunManifest::new("evolve", params, None), &[(out, csv)])
}

fn cmd_asymptotic(args: &StateArgs) -> CmdResult {
    let st = load_state(&args.state)?.state;
    let p = persistence(&st).ok();
    let report = json!({
        "K_inf": asymptotic_coherence(&st),
        "Cf_0": concurrence_pure(&st),
        "Cf_inf": asymptotic_concurrence(&st),
        "P": p,
        "label": classify_subspace(&st, DEFAULT_CLASSIFY_TOL).as_str(),
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report serialises");
    text.push('\n');
    match &args.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(out) => {
            let params = json!({ "state": input_params(&args.state) });
            emit(RunManifest::new("asymptotic", params, None), &[(out, text.into_bytes())])
        }
    }
}

fn cmd_sample(args: &SampleArgs) -> CmdResult {
    let cfg = SamplerConfig { n_samples: args.n, seed: args.seed, enforce_order: !args.no_enforce_order };
    let records = run_atlas(&cfg)?;
    let mut csv = Vec::with_capacity(records.len() * 80);
    write_atlas_csv(&mut csv, &records).map_err(|e| Failure::Unwritable(e.to_string()))?;
    let summary = AtlasSummary::from_records(&records);
    let mut summary_text = serde_json::to_string_pretty(&summary).expect("summary serialises");
    summary_text.push('\n');
    let summary_path = args.summary.clone().unwrap_or_else(|| {
        let mut name = args.out.as_os_str().to_owned();
        name.push(".summary.json");
        PathBuf::from(name)
    });
    let params = json!({ "n": args.n, "enforce_order": cfg.enforce_order });
    emit(
        RunManifest::new("sample", params, Some(args.seed)),
        &[(&args.out, csv), (&summary_path, summary_text.clone().into_bytes())],
    )?;
    print!("{summary_text}");
    Ok(())
}

fn cmd_classify(args: &ClassifyArgs) -> CmdResult {
    if !(args.tol >= 0.0) {
        return Err(Failure::Usage(format!("--tol must be non-negative, got {}", args.tol)));
    }
    let st = load_state(&args.input.state)?.state;
    let label = format!("{}\n", classify_subspace(&st, args.tol));
    match &args.input.out {
        None => {
            print!("{label}");
            Ok(())
        }
        Some(out) => {
            let params = json!({ "state": input_params(&args.input.state), "tol": args.tol });
            emit(RunManifest::new("classify", params, None), &[(out, label.into_bytes())])
        }
    }
}

fn configure_threads() -> CmdResult {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Evolve(a) => cmd_evolve(a),
        Command::Asymptotic(a) => cmd_asymptotic(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Classify(a) => cmd_classify(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
