//! Exact dephasing dynamics in the interaction picture.
//!
//! Each matrix element in the angular-momentum basis evolves as
//! `ρ_mn(t) = ρ_mn(0) f_mn(t)` with
//! `f_mn = exp(−(L_m − L_n)² Γ) · exp(−i (L_m² − L_n²) r)`,
//! where `L = (2, 1, 0, −1, −2, 0)` are the `J_z` eigenvalues and `Γ`, `r`
//! come from [`crate::bath`].

use nalgebra::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bath::{bath_functions, BathCache, BathFunctions, BathParams};
use crate::error::{Error, Result};
use crate::linalg::CMatrix6;
use crate::measures::{concurrence_pure, observables, Observables};
use crate::scalar::{cabs, Real};
use crate::state::{asymptotic_coherence_of, AngMomState, BasisTag, DensityMatrix6};

/// `C_f(0)` at or below this has no meaningful persistence ratio.
pub const MIN_INITIAL_CONCURRENCE: f64 = 1e-12;

/// The `J_z` spectrum `L_n` of the basis states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LSpectrum;

impl LSpectrum {
    pub const VALUES: [i32; 6] = [2, 1, 0, -1, -2, 0];

    /// `L_n` for a 1-based index.
    pub fn get(n: usize) -> i32 {
        Self::VALUES[n - 1]
    }
}

/// `f_mn` from precomputed bath functions (1-based indices).
pub fn dephasing_factor_with<T: Real>(m: usize, n: usize, bath: &BathFunctions<T>) -> Complex<T> {
    assert!((1..=6).contains(&m) && (1..=6).contains(&n), "index out of range: ({m}, {n})");
    let (lm, ln) = (LSpectrum::get(m), LSpectrum::get(n));
    let decay = (lm - ln) * (lm - ln);
    let phase = lm * lm - ln * ln;
    if decay == 0 && phase == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let modulus = (-T::lit(decay as f64) * bath.gamma).exp();
    let angle = -T::lit(phase as f64) * bath.r();
    Complex::new(modulus * angle.cos(), modulus * angle.sin())
}

/// `f_mn(t)` (1-based indices).
pub fn dephasing_factor<T: Real>(m: usize, n: usize, t: T, params: &BathParams<T>) -> Result<Complex<T>> {
    Ok(dephasing_factor_with(m, n, &bath_functions(t, params)?))
}

/// All 36 factors; the lower triangle is the conjugate of the upper one.
pub fn factor_matrix<T: Real>(bath: &BathFunctions<T>) -> CMatrix6<T> {
    let mut f = CMatrix6::<T>::identity();
    for m in 1..=6 {
        for n in (m + 1)..=6 {
            let z = dephasing_factor_with(m, n, bath);
            f[(m - 1, n - 1)] = z;
            f[(n - 1, m - 1)] = z.conj();
        }
    }
    f
}

/// `ρ(t)` for bath functions already evaluated at `t`. The result is in the
/// angular-momentum basis whatever the basis of `rho0`.
pub fn evolve_with<T: Real>(rho0: &DensityMatrix6<T>, bath: &BathFunctions<T>) -> DensityMatrix6<T> {
    let rho = rho0.to_basis(BasisTag::AngMom);
    let m = rho.matrix().component_mul(&factor_matrix(bath));
    DensityMatrix6::new_unchecked(m, BasisTag::AngMom)
}

pub fn evolve<T: Real>(rho0: &DensityMatrix6<T>, t: T, params: &BathParams<T>) -> Result<DensityMatrix6<T>> {
    Ok(evolve_with(rho0, &bath_functions(t, params)?))
}

/// How the points of a [`TimeGrid`] are spaced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// `count` times between `t_min` and `t_max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self { t_min: 0.0, t_max: 30.0, count: 300, spacing: Spacing::Linear }
    }
}

impl TimeGrid {
    pub fn linear(t_min: f64, t_max: f64, count: usize) -> Self {
        Self { t_min, t_max, count, spacing: Spacing::Linear }
    }

    pub fn log(t_min: f64, t_max: f64, count: usize) -> Self {
        Self { t_min, t_max, count, spacing: Spacing::Log }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParameter("time grid needs at least one point".into()));
        }
        if !(self.t_min >= 0.0) || !self.t_max.is_finite() || self.t_max < self.t_min {
            return Err(Error::InvalidParameter(format!(
                "time grid bounds must satisfy 0 <= t_min <= t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.spacing == Spacing::Log && self.t_min <= 0.0 {
            return Err(Error::InvalidParameter("log spacing needs t_min > 0".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        if self.count == 1 {
            return Ok(vec![self.t_min]);
        }
        let last = (self.count - 1) as f64;
        let pts = (0..self.count).map(|i| {
            if i == self.count - 1 {
                return self.t_max;
            }
            let u = i as f64 / last;
            match self.spacing {
                Spacing::Linear => self.t_min + u * (self.t_max - self.t_min),
                Spacing::Log => (self.t_min.ln() + u * (self.t_max.ln() - self.t_min.ln())).exp(),
            }
        });
        Ok(pts.collect())
    }
}

/// One row of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint<T> {
    pub t: T,
    pub observables: Observables<T>,
}

/// Evolves `rho0` over `times` in parallel; output follows the input order.
pub fn evolve_series<T: Real>(
    rho0: &DensityMatrix6<T>,
    times: &[T],
    cache: &BathCache<T>,
) -> Result<Vec<TrajectoryPoint<T>>> {
    let rho0 = rho0.to_basis(BasisTag::AngMom);
    times
        .par_iter()
        .map(|&t| {
            let rho = evolve_with(&rho0, &cache.get(t)?);
            Ok(TrajectoryPoint { t, observables: observables(&rho)? })
        })
        .collect()
}

/// The `Γ → ∞` limit: populations and the `(3,6)` coherence survive.
pub fn asymptotic_state<T: Real>(rho0: &DensityMatrix6<T>) -> DensityMatrix6<T> {
    let rho = rho0.to_basis(BasisTag::AngMom);
    let src = rho.matrix();
    let mut m = CMatrix6::<T>::zeros();
    for i in 0..6 {
        m[(i, i)] = src[(i, i)];
    }
    m[(2, 5)] = src[(2, 5)];
    m[(5, 2)] = src[(5, 2)];
    DensityMatrix6::new_unchecked(m, BasisTag::AngMom)
}

/// `K_∞ = | |α₃|² − |α₆|² + 2i Im(α₃α₆*) |`.
pub fn asymptotic_coherence<T: Real>(state: &AngMomState<T>) -> T {
    asymptotic_coherence_of(state.alpha(3), state.alpha(6))
}

/// `C_f^∞ = max{0, K_∞ − 2(|α₁α₅| + |α₂α₄|)}`.
pub fn asymptotic_concurrence<T: Real>(state: &AngMomState<T>) -> T {
    let a = |n| state.alpha(n);
    let ed = cabs(a(1) * a(5)) + cabs(a(2) * a(4));
    (asymptotic_coherence(state) - T::lit(2.0) * ed).max(T::zero())
}

/// Persistence ratio `P = C_f^∞ / C_f(0)`.
pub fn persistence<T: Real>(state: &AngMomState<T>) -> Result<T> {
    let c0 = concurrence_pure(state);
    if c0 <= T::lit(MIN_INITIAL_CONCURRENCE) {
        return Err(Error::ZeroInitialEntanglement(c0.as_f64()));
    }
    Ok(asymptotic_concurrence(state) / c0)
}
