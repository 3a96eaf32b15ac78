//! Fermionic concurrence, Slater-basis l1 coherence, von Neumann entropy and purity.

use nalgebra::Matrix6;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, psd_sqrt, singular_values_desc, CMatrix6};
use crate::scalar::{abs2, cabs, creal, Real};
use crate::state::{AngMomState, BasisTag, DensityMatrix6, SlaterState, MIN_EIGENVALUE};

/// Eigenvalues of ρ below this are treated as absent when entropies are summed.
pub const ENTROPY_CUTOFF: f64 = 1e-15;

/// Square-rooted spectrum of `ρρ̃` and the resulting concurrence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceBreakdown<T: Real> {
    /// Non-negative, descending.
    pub lambdas: [T; 6],
    pub value: T,
}

/// The real involution `M` of the flip operator `𝔻 = M κ`, written in the
/// [`BasisTag::BTilde`] basis.
pub fn flip_matrix<T: Real>() -> Matrix6<T> {
    let mut m = Matrix6::<T>::zeros();
    m[(0, 4)] = T::one();
    m[(4, 0)] = T::one();
    m[(1, 3)] = -T::one();
    m[(3, 1)] = -T::one();
    m[(2, 2)] = T::one();
    m[(5, 5)] = T::one();
    m
}

/// Concurrence of a pure state: `|α₃² − α₆² + 2(α₁α₅ − α₂α₄)|`.
pub fn concurrence_pure<T: Real>(state: &AngMomState<T>) -> T {
    let a = |n| state.alpha(n);
    let two = creal(T::lit(2.0));
    cabs(a(3) * a(3) - a(6) * a(6) + two * (a(1) * a(5) - a(2) * a(4)))
}

/// Pure-state concurrence from Slater coefficients: `2|s₁₂s₃₄ − s₁₃s₂₄ + s₁₄s₂₃|`.
pub fn concurrence_pure_slater<T: Real>(s: &SlaterState<T>) -> T {
    T::lit(2.0) * cabs(s.s12() * s.s34() - s.s13() * s.s24() + s.s14() * s.s23())
}

/// Mixed-state fermionic concurrence `max{0, λ₁ − Σ_{i≥2} λᵢ}`.
///
/// The `λᵢ` are the square roots of the eigenvalues of `ρρ̃` with
/// `ρ̃ = M ρ* M` in the `BTilde` basis. They are obtained as the singular
/// values of `√ρ M (√ρ)*`, whose Gram matrix `√ρ ρ̃ √ρ` is similar to `ρρ̃`.
pub fn concurrence<T: Real>(rho: &DensityMatrix6<T>) -> Result<ConcurrenceBreakdown<T>> {
    let b = rho.to_basis(BasisTag::BTilde);
    let eig = hermitian_eigenvalues(b.matrix());
    if eig[0] < T::tol(MIN_EIGENVALUE) {
        return Err(Error::NonPhysical(format!(
            "density matrix eigenvalue {:e} is negative",
            eig[0].as_f64()
        )));
    }
    // Round-off eigenvalues of rank-deficient inputs sit at a few eps.
    let floor = T::lit(64.0) * T::EPSILON * eig[5].max(T::one());
    let root = psd_sqrt(b.matrix(), floor);
    let flip: CMatrix6<T> = flip_matrix::<T>().map(creal);
    let a = root * flip * root.conjugate();
    let lambdas = singular_values_desc(&a);
    let rest = lambdas[1..].iter().fold(T::zero(), |acc, &l| acc + l);
    Ok(ConcurrenceBreakdown { lambdas, value: (lambdas[0] - rest).max(T::zero()) })
}

/// l1 coherence `Σ_{ν≠μ} |ρ_νμ|` in the Slater-determinant basis.
pub fn coherence<T: Real>(rho: &DensityMatrix6<T>) -> T {
    l1_offdiagonal(rho.to_basis(BasisTag::Slater).matrix())
}

pub(crate) fn l1_offdiagonal<T: Real>(m: &CMatrix6<T>) -> T {
    let mut k = T::zero();
    for i in 0..6 {
        for j in 0..6 {
            if i != j {
                k += cabs(m[(i, j)]);
            }
        }
    }
    k
}

/// `−Tr ρ ln ρ` in nats.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix6<T>) -> Result<T> {
    let eig = hermitian_eigenvalues(rho.matrix());
    if eig[0] < T::tol(MIN_EIGENVALUE) {
        return Err(Error::NonPhysical(format!(
            "density matrix eigenvalue {:e} is negative",
            eig[0].as_f64()
        )));
    }
    let cutoff = T::lit(ENTROPY_CUTOFF);
    Ok(eig
        .iter()
        .filter(|&&p| p > cutoff)
        .fold(T::zero(), |acc, &p| acc - p * p.ln()))
}

/// `Tr ρ²`.
pub fn purity<T: Real>(rho: &DensityMatrix6<T>) -> T {
    // ρ Hermitian ⇒ Tr ρ² = Σ |ρ_ij|².
    rho.matrix().iter().fold(T::zero(), |acc, z| acc + abs2(*z))
}

/// The four scalar diagnostics reported along a trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observables<T> {
    pub concurrence: T,
    pub coherence: T,
    pub entropy: T,
    pub purity: T,
}

pub fn observables<T: Real>(rho: &DensityMatrix6<T>) -> Result<Observables<T>> {
    Ok(Observables {
        concurrence: concurrence(rho)?.value,
        coherence: coherence(rho),
        entropy: von_neumann_entropy(rho)?,
        purity: purity(rho),
    })
}
