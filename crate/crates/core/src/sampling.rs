//! Monte-Carlo atlas of real, non-negative states over the `(x, y, z)`
//! tetrahedron `2(x+y)+z ≤ 1`, with `x = α₂α₄`, `y = α₁α₅`, `z = |α₃² − α₆²|`.
//!
//! Samples are drawn in fixed-size chunks. Chunk `k` uses its own ChaCha8
//! stream `k` under the user seed, so the output does not depend on how many
//! threads run the chunks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::concurrence_pure;
use crate::state::{make_real_state, AngMomState};

/// Samples per RNG stream.
pub const CHUNK_SIZE: usize = 4096;
/// `C_f(0)` above this gets a persistence ratio.
pub const RATIO_THRESHOLD: f64 = 1e-12;
/// `|P − 1|` within this counts as full persistence in [`AtlasSummary`].
pub const FULL_PERSISTENCE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PersistenceRecord {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub cf0: f64,
    pub cf_inf: f64,
    /// `cf_inf / cf0`, absent when `cf0` is numerically zero.
    pub p_ratio: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n_samples: usize,
    pub seed: u64,
    /// Swap `α₃` and `α₆` so that `α₃ ≥ α₆`.
    pub enforce_order: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { n_samples: 100_000, seed: 0, enforce_order: true }
    }
}

/// A point uniform on the unit sphere restricted to the non-negative orthant.
pub fn random_real_state<R: Rng + ?Sized>(rng: &mut R, enforce_order: bool) -> AngMomState<f64> {
    loop {
        let mut g: [f64; 6] = std::array::from_fn(|_| rng.sample::<f64, _>(StandardNormal).abs());
        if enforce_order && g[2] < g[5] {
            g.swap(2, 5);
        }
        // A zero vector has probability zero; redraw rather than fail.
        if let Ok(state) = make_real_state(&g) {
            return state;
        }
    }
}

/// `(α₂α₄, α₁α₅, |α₃² − α₆²|)` for a real state.
pub fn xyz_map(state: &AngMomState<f64>) -> (f64, f64, f64) {
    let a = |n| state.alpha(n).re;
    (a(2) * a(4), a(1) * a(5), (a(3) * a(3) - a(6) * a(6)).abs())
}

/// `max{0, z − 2(x + y)}`.
pub fn asymptotic_concurrence_xyz(x: f64, y: f64, z: f64) -> f64 {
    (z - 2.0 * (x + y)).max(0.0)
}

pub fn record_for(state: &AngMomState<f64>) -> PersistenceRecord {
    let (x, y, z) = xyz_map(state);
    let cf0 = concurrence_pure(state);
    let cf_inf = asymptotic_concurrence_xyz(x, y, z);
    let p_ratio = (cf0 > RATIO_THRESHOLD).then(|| cf_inf / cf0);
    PersistenceRecord { x, y, z, cf0, cf_inf, p_ratio }
}

fn chunk_records(cfg: &SamplerConfig, chunk: usize) -> Vec<PersistenceRecord> {
    let start = chunk * CHUNK_SIZE;
    let len = CHUNK_SIZE.min(cfg.n_samples - start);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chunk as u64);
    (0..len).map(|_| record_for(&random_real_state(&mut rng, cfg.enforce_order))).collect()
}

/// Draws `n_samples` states and returns their records in generation order.
pub fn run_atlas(cfg: &SamplerConfig) -> Result<Vec<PersistenceRecord>> {
    if cfg.n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
    }
    let chunks = cfg.n_samples.div_ceil(CHUNK_SIZE);
    let parts: Vec<Vec<PersistenceRecord>> = (0..chunks).into_par_iter().map(|k| chunk_records(cfg, k)).collect();
    Ok(parts.concat())
}

/// Aggregate checks over an atlas.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtlasSummary {
    pub n_samples: usize,
    /// Share of all samples with `P > 0`.
    pub fraction_persistent: f64,
    /// Share of all samples with `|P − 1| ≤ 1e−9`.
    pub fraction_full_persistence: f64,
    /// `max(0, 2(x+y)+z − 1)` over the atlas.
    pub max_tetrahedron_violation: f64,
    /// `max(0, cf_inf − cf0)` over the atlas.
    pub max_monotonicity_violation: f64,
}

impl AtlasSummary {
    pub fn from_records(records: &[PersistenceRecord]) -> Self {
        let n = records.len();
        let mut persistent = 0usize;
        let mut full = 0usize;
        let mut bound = 0.0f64;
        let mut mono = 0.0f64;
        for r in records {
            if let Some(p) = r.p_ratio {
                persistent += usize::from(p > 0.0);
                full += usize::from((p - 1.0).abs() <= FULL_PERSISTENCE_TOL);
            }
            bound = bound.max(2.0 * (r.x + r.y) + r.z - 1.0);
            mono = mono.max(r.cf_inf - r.cf0);
        }
        let share = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
        Self {
            n_samples: n,
            fraction_persistent: share(persistent),
            fraction_full_persistence: share(full),
            max_tetrahedron_violation: bound,
            max_monotonicity_violation: mono,
        }
    }
}
