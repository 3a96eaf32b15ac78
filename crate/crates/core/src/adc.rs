//! Amplitude damping on the `j = 2` ladder.
//!
//! Each `|2,m⟩` with `m > −2` decays to `|2,m−1⟩` with probability `p` while
//! `|2,−2⟩` and `|0,0⟩` are untouched. In the angular-momentum basis this is
//! the Kraus pair
//!
//! ```text
//! K₀ = diag(√(1−p), √(1−p), √(1−p), √(1−p), 1, 1)
//! K₁ = √p Σ_{n=1..4} |ψ_{n+1}⁻⟩⟨ψₙ⁻|
//! ```
//!
//! The map is not a one-parameter semigroup in `p`: two applications can move
//! population down two rungs, which a single application never does.

use nalgebra::Matrix6;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix6, CVector6};
use crate::measures::{observables, Observables};
use crate::scalar::{creal, Real};
use crate::state::{AngMomState, BasisTag, DensityMatrix6};

/// How the damping probability depends on time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ADCParams<T> {
    /// A fixed `p`, independent of time.
    Probability(T),
    /// `p(t) = 1 − e^{−γt}`.
    Rate(T),
}

impl<T: Real> Default for ADCParams<T> {
    fn default() -> Self {
        ADCParams::Rate(T::one())
    }
}

impl<T: Real> ADCParams<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ADCParams::Probability(p) => check_probability(p),
            ADCParams::Rate(g) if g > T::zero() && g.is_finite() => Ok(()),
            ADCParams::Rate(g) => {
                Err(Error::InvalidParameter(format!("decay rate must be positive, got {}", g.as_f64())))
            }
        }
    }
}

fn check_probability<T: Real>(p: T) -> Result<()> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(Error::BadProbability(p.as_f64()))
    }
}

/// Damping probability at time `t`.
pub fn p_of_t<T: Real>(t: T, params: &ADCParams<T>) -> Result<T> {
    if !(t >= T::zero()) {
        return Err(Error::InvalidParameter(format!("time must be non-negative, got {}", t.as_f64())));
    }
    params.validate()?;
    Ok(match *params {
        ADCParams::Probability(p) => p,
        ADCParams::Rate(g) => -(-g * t).exp_m1(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrausPair<T: Real> {
    pub k0: Matrix6<T>,
    pub k1: Matrix6<T>,
}

impl<T: Real> KrausPair<T> {
    pub fn new(p: T) -> Result<Self> {
        check_probability(p)?;
        let keep = (T::one() - p).sqrt();
        let jump = p.sqrt();
        let mut k0 = Matrix6::<T>::identity();
        let mut k1 = Matrix6::<T>::zeros();
        for n in 0..4 {
            k0[(n, n)] = keep;
            k1[(n + 1, n)] = jump;
        }
        Ok(Self { k0, k1 })
    }

    /// `K₀†K₀ + K₁†K₁`, the identity for a trace-preserving pair.
    pub fn completeness(&self) -> Matrix6<T> {
        self.k0.transpose() * self.k0 + self.k1.transpose() * self.k1
    }

    /// `K₀ρK₀† + K₁ρK₁†` for a matrix in the angular-momentum basis.
    pub fn apply(&self, m: &CMatrix6<T>) -> CMatrix6<T> {
        let k0 = self.k0.map(creal);
        let k1 = self.k1.map(creal);
        k0 * m * k0.transpose() + k1 * m * k1.transpose()
    }
}

/// `|A⟩⟨A| + |B⟩⟨B|` for the pure input `state`.
pub fn adc_evolve_pure<T: Real>(state: &AngMomState<T>, p: T) -> Result<DensityMatrix6<T>> {
    check_probability(p)?;
    let alpha = state.amplitudes();
    let keep = creal((T::one() - p).sqrt());
    let jump = creal(p.sqrt());
    let mut a = *alpha;
    let mut b = CVector6::<T>::zeros();
    for n in 0..4 {
        a[n] = keep * alpha[n];
        b[n + 1] = jump * alpha[n];
    }
    let m = a * a.adjoint() + b * b.adjoint();
    Ok(DensityMatrix6::new_unchecked(m, BasisTag::AngMom))
}

/// The channel on a mixed input; the result is in the angular-momentum basis.
pub fn adc_evolve<T: Real>(rho: &DensityMatrix6<T>, p: T) -> Result<DensityMatrix6<T>> {
    let kraus = KrausPair::new(p)?;
    let rho = rho.to_basis(BasisTag::AngMom);
    Ok(DensityMatrix6::new_unchecked(kraus.apply(rho.matrix()), BasisTag::AngMom))
}

/// The `p → 1` limit for a pure input.
///
/// Population of `|ψ₁⁻⟩` is gone, amplitudes `α₁..α₄` have moved one rung
/// down as a coherent block on `{2,…,5}`, and `α₅|ψ₅⁻⟩ + α₆|ψ₆⁻⟩` is intact.
pub fn adc_asymptotic<T: Real>(state: &AngMomState<T>) -> DensityMatrix6<T> {
    let alpha = state.amplitudes();
    let mut shifted = CVector6::<T>::zeros();
    let mut kept = CVector6::<T>::zeros();
    for n in 0..4 {
        shifted[n + 1] = alpha[n];
    }
    kept[4] = alpha[4];
    kept[5] = alpha[5];
    let m = shifted * shifted.adjoint() + kept * kept.adjoint();
    DensityMatrix6::new_unchecked(m, BasisTag::AngMom)
}

/// One row of a damping trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdcPoint<T> {
    pub t: T,
    pub p: T,
    pub observables: Observables<T>,
}

/// Applies the channel at `p(t)` for every `t` in `times`, in parallel and in order.
pub fn adc_series<T: Real>(rho0: &DensityMatrix6<T>, times: &[T], params: &ADCParams<T>) -> Result<Vec<AdcPoint<T>>> {
    params.validate()?;
    let rho0 = rho0.to_basis(BasisTag::AngMom);
    times
        .par_iter()
        .map(|&t| {
            let p = p_of_t(t, params)?;
            let rho = adc_evolve(&rho0, p)?;
            Ok(AdcPoint { t, p, observables: observables(&rho)? })
        })
        .collect()
}
