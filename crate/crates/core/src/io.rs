//! Text formats: state JSON files and the CSV tables written by the CLI.

use std::io::Write;

use nalgebra::Complex;
use serde::Deserialize;

use crate::adc::AdcPoint;
use crate::dephasing::TrajectoryPoint;
use crate::error::{Error, Result};
use crate::sampling::PersistenceRecord;
use crate::state::{from_slater, make_slater_state, make_state, norm_deviation, AngMomState, BasisTag};

/// Significant digits in CSV output.
pub const CSV_DIGITS: usize = 12;

pub const TRAJECTORY_HEADER: &str = "t,Cf,K,SvN,purity";
pub const ADC_HEADER: &str = "t,p,Cf,K,SvN,purity";
pub const ATLAS_HEADER: &str = "x,y,z,cf0,cf_inf,P";

/// Formats `v` like C's `%.{digits}g`: fixed or scientific notation,
/// whichever is shorter for the exponent, with trailing zeros removed.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1);
    // Rounding may carry into the next decade, so read the exponent after rounding.
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn num(v: f64) -> String {
    fmt_sig(v, CSV_DIGITS)
}

pub fn write_trajectory_csv<W: Write>(mut w: W, rows: &[TrajectoryPoint<f64>]) -> std::io::Result<()> {
    writeln!(w, "{TRAJECTORY_HEADER}")?;
    for r in rows {
        let o = &r.observables;
        writeln!(w, "{},{},{},{},{}", num(r.t), num(o.concurrence), num(o.coherence), num(o.entropy), num(o.purity))?;
    }
    w.flush()
}

pub fn write_adc_csv<W: Write>(mut w: W, rows: &[AdcPoint<f64>]) -> std::io::Result<()> {
    writeln!(w, "{ADC_HEADER}")?;
    for r in rows {
        let o = &r.observables;
        writeln!(
            w,
            "{},{},{},{},{},{}",
            num(r.t),
            num(r.p),
            num(o.concurrence),
            num(o.coherence),
            num(o.entropy),
            num(o.purity)
        )?;
    }
    w.flush()
}

/// The `P` column is left empty when no ratio exists.
pub fn write_atlas_csv<W: Write>(mut w: W, rows: &[PersistenceRecord]) -> std::io::Result<()> {
    writeln!(w, "{ATLAS_HEADER}")?;
    for r in rows {
        let p = r.p_ratio.map(num).unwrap_or_default();
        writeln!(w, "{},{},{},{},{},{}", num(r.x), num(r.y), num(r.z), num(r.cf0), num(r.cf_inf), p)?;
    }
    w.flush()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    basis: BasisTag,
    amplitudes: Vec<[f64; 2]>,
}

/// A state read from disk together with how far its raw amplitudes were
/// from unit norm before renormalisation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoadedState {
    pub state: AngMomState<f64>,
    pub basis: BasisTag,
    pub norm_deviation: f64,
}

/// Parses `{"basis": "angmom"|"slater", "amplitudes": [[re, im], ...]}`.
pub fn parse_state_json(text: &str) -> Result<LoadedState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::MalformedState(e.to_string()))?;
    let amps: Vec<Complex<f64>> = file.amplitudes.iter().map(|[re, im]| Complex::new(*re, *im)).collect();
    if amps.len() != 6 {
        return Err(Error::MalformedState(format!("expected 6 amplitudes, found {}", amps.len())));
    }
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::MalformedState("non-finite amplitude".into()));
    }
    let deviation = norm_deviation(&amps);
    let malformed = |e: Error| Error::MalformedState(e.to_string());
    let state = match file.basis {
        BasisTag::AngMom => make_state(&amps).map_err(malformed)?,
        BasisTag::Slater => from_slater(&make_slater_state(&amps).map_err(malformed)?),
        BasisTag::BTilde => return Err(Error::MalformedState("state files use basis angmom or slater".into())),
    };
    Ok(LoadedState { state, basis: file.basis, norm_deviation: deviation })
}

pub fn read_state_file(path: &std::path::Path) -> Result<LoadedState> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedState(format!("cannot read {}: {e}", path.display())))?;
    parse_state_json(&text)
}

/// Serialises angular-momentum amplitudes with 17 significant digits.
pub fn state_to_json(state: &AngMomState<f64>) -> String {
    let amps: Vec<String> = state
        .amplitudes()
        .iter()
        .map(|z| format!("[{:.16e}, {:.16e}]", z.re, z.im))
        .collect();
    format!("{{\"basis\": \"angmom\", \"amplitudes\": [{}]}}\n", amps.join(", "))
}
