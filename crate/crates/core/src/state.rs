//! Two-fermion pure states, density matrices and the bases they are written in.
//!
//! The antisymmetric space of two fermions with four levels is six dimensional.
//! Two orthonormal bases are used throughout:
//!
//! * the angular-momentum basis `{|2,2⟩, |2,1⟩, |2,0⟩, |2,−1⟩, |2,−2⟩, |0,0⟩}`,
//!   whose amplitudes are called `α₁..α₆` (stored at indices `0..6`);
//! * the Slater-determinant basis ordered as `(s₁₂, s₁₃, s₁₄, s₂₄, s₃₄, s₂₃)`.
//!
//! Slater coefficients are kept unit-norm. With the antisymmetric-tensor
//! coefficients `w_ij` (normalised as `4 Σ |w_ij|² = 1`) the relation is
//! `s_ij = 2 w_ij`.
//!
//! A third basis, [`BasisTag::BTilde`], equals the angular-momentum basis with
//! the last vector replaced by `i|0,0⟩`; the concurrence flip operator is real
//! in that basis.

use nalgebra::{Complex, Matrix6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_deviation, CMatrix6, CVector6};
use crate::scalar::{abs2, cabs, cplx, creal, Real};

/// Inputs whose norm differs from one by more than this are reported as
/// grossly off-norm (they are still renormalised).
pub const AUTO_RENORM_TOL: f64 = 1e-6;
/// Below this squared norm an amplitude vector is rejected.
pub const ZERO_NORM_TOL: f64 = 1e-12;
/// Default magnitude threshold for [`classify_subspace`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-12;

pub(crate) const NORM_TOL: f64 = 1e-9;
pub(crate) const HERMITIAN_TOL: f64 = 1e-12;
pub(crate) const TRACE_TOL: f64 = 1e-12;
pub(crate) const MIN_EIGENVALUE: f64 = -1e-10;

/// Basis a density matrix is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisTag {
    AngMom,
    Slater,
    BTilde,
}

/// Pure state in the angular-momentum basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngMomState<T: Real> {
    alpha: CVector6<T>,
}

/// Pure state in the ordered Slater-determinant basis `(s₁₂, s₁₃, s₁₄, s₂₄, s₃₄, s₂₃)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlaterState<T: Real> {
    s: CVector6<T>,
}

fn check_norm<T: Real>(v: &CVector6<T>) -> Result<()> {
    let n2 = v.iter().fold(T::zero(), |acc, z| acc + abs2(*z));
    if (n2 - T::one()).abs() > T::tol(NORM_TOL) {
        return Err(Error::InvalidParameter(format!(
            "state norm² {} differs from 1",
            n2.as_f64()
        )));
    }
    Ok(())
}

impl<T: Real> AngMomState<T> {
    /// Wraps amplitudes that are already unit norm.
    pub fn new(alpha: CVector6<T>) -> Result<Self> {
        check_norm(&alpha)?;
        Ok(Self { alpha })
    }

    /// Basis state `|ψₙ⁻⟩` with `n` counted from 1.
    pub fn basis(n: usize) -> Self {
        assert!((1..=6).contains(&n), "basis index {n} out of 1..=6");
        let mut alpha = CVector6::zeros();
        alpha[n - 1] = creal(T::one());
        Self { alpha }
    }

    pub fn amplitudes(&self) -> &CVector6<T> {
        &self.alpha
    }

    /// `αₙ` with `n` counted from 1.
    #[inline]
    pub fn alpha(&self, n: usize) -> Complex<T> {
        self.alpha[n - 1]
    }
}

impl<T: Real> SlaterState<T> {
    pub fn new(s: CVector6<T>) -> Result<Self> {
        check_norm(&s)?;
        Ok(Self { s })
    }

    pub fn coefficients(&self) -> &CVector6<T> {
        &self.s
    }

    pub fn s12(&self) -> Complex<T> {
        self.s[0]
    }
    pub fn s13(&self) -> Complex<T> {
        self.s[1]
    }
    pub fn s14(&self) -> Complex<T> {
        self.s[2]
    }
    pub fn s24(&self) -> Complex<T> {
        self.s[3]
    }
    pub fn s34(&self) -> Complex<T> {
        self.s[4]
    }
    pub fn s23(&self) -> Complex<T> {
        self.s[5]
    }

    /// Antisymmetric-tensor coefficients `w_ij = s_ij / 2`, same ordering.
    pub fn w(&self) -> CVector6<T> {
        self.s * creal(T::lit(0.5))
    }
}

fn normalized<T: Real>(values: &[Complex<T>]) -> Result<CVector6<T>> {
    if values.len() != 6 {
        return Err(Error::BadLength(values.len()));
    }
    let n2 = values.iter().fold(T::zero(), |acc, z| acc + abs2(*z));
    if n2 < T::lit(ZERO_NORM_TOL) || !n2.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let inv = creal(T::one() / n2.sqrt());
    Ok(CVector6::from_fn(|i, _| values[i] * inv))
}

/// `|‖v‖ − 1|` for a raw amplitude list.
pub fn norm_deviation<T: Real>(values: &[Complex<T>]) -> T {
    let n2 = values.iter().fold(T::zero(), |acc, z| acc + abs2(*z));
    (n2.sqrt() - T::one()).abs()
}

/// Builds a state from six angular-momentum amplitudes, renormalising them.
pub fn make_state<T: Real>(alpha: &[Complex<T>]) -> Result<AngMomState<T>> {
    Ok(AngMomState { alpha: normalized(alpha)? })
}

/// Same as [`make_state`] for real amplitudes.
pub fn make_real_state<T: Real>(alpha: &[T]) -> Result<AngMomState<T>> {
    let c: Vec<Complex<T>> = alpha.iter().map(|&a| creal(a)).collect();
    make_state(&c)
}

/// Builds a Slater-basis state, renormalising the coefficients.
pub fn make_slater_state<T: Real>(s: &[Complex<T>]) -> Result<SlaterState<T>> {
    Ok(SlaterState { s: normalized(s)? })
}

/// The real orthogonal involution taking angular-momentum amplitudes to
/// Slater coefficients (`s = U α`, `U = Uᵀ = U⁻¹`).
pub fn slater_transform<T: Real>() -> Matrix6<T> {
    let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut u = Matrix6::<T>::zeros();
    u[(0, 0)] = T::one();
    u[(1, 1)] = T::one();
    u[(3, 3)] = T::one();
    u[(4, 4)] = T::one();
    u[(2, 2)] = h;
    u[(2, 5)] = h;
    u[(5, 2)] = h;
    u[(5, 5)] = -h;
    u
}

fn slater_transform_c<T: Real>() -> CMatrix6<T> {
    slater_transform::<T>().map(creal)
}

/// Diagonal unitary taking angular-momentum coordinates to [`BasisTag::BTilde`] coordinates.
fn btilde_transform<T: Real>() -> CMatrix6<T> {
    let mut v = CMatrix6::<T>::identity();
    v[(5, 5)] = cplx(T::zero(), -T::one());
    v
}

fn from_angmom_transform<T: Real>(target: BasisTag) -> CMatrix6<T> {
    match target {
        BasisTag::AngMom => CMatrix6::identity(),
        BasisTag::Slater => slater_transform_c(),
        BasisTag::BTilde => btilde_transform(),
    }
}

pub fn to_slater<T: Real>(state: &AngMomState<T>) -> SlaterState<T> {
    SlaterState { s: slater_transform_c::<T>() * state.alpha }
}

pub fn from_slater<T: Real>(s: &SlaterState<T>) -> AngMomState<T> {
    AngMomState { alpha: slater_transform_c::<T>() * s.s }
}

/// Six-dimensional density operator together with the basis of its matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix6<T: Real> {
    m: CMatrix6<T>,
    basis: BasisTag,
}

impl<T: Real> DensityMatrix6<T> {
    /// Validates Hermiticity, unit trace and positivity before wrapping `m`.
    pub fn new(m: CMatrix6<T>, basis: BasisTag) -> Result<Self> {
        let rho = Self { m, basis };
        rho.check_physical()?;
        Ok(rho)
    }

    /// Wraps `m` without validation. Callers own the physicality contract.
    pub fn new_unchecked(m: CMatrix6<T>, basis: BasisTag) -> Self {
        Self { m, basis }
    }

    /// `I/6`.
    pub fn maximally_mixed(basis: BasisTag) -> Self {
        Self { m: CMatrix6::identity() * creal(T::one() / T::lit(6.0)), basis }
    }

    /// Diagonal density matrix from populations (not renormalised).
    pub fn from_populations(p: &[T; 6], basis: BasisTag) -> Result<Self> {
        let d = CVector6::from_fn(|i, _| creal(p[i]));
        Self::new(CMatrix6::from_diagonal(&d), basis)
    }

    pub fn matrix(&self) -> &CMatrix6<T> {
        &self.m
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    /// Element with 1-based indices, matching `ρ_mn` notation.
    #[inline]
    pub fn elem(&self, m: usize, n: usize) -> Complex<T> {
        self.m[(m - 1, n - 1)]
    }

    pub fn trace(&self) -> Complex<T> {
        self.m.trace()
    }

    pub fn hermiticity_deviation(&self) -> T {
        hermiticity_deviation(&self.m)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [T; 6] {
        let v = hermitian_eigenvalues(&self.m);
        [v[0], v[1], v[2], v[3], v[4], v[5]]
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()[0]
    }

    pub fn check_physical(&self) -> Result<()> {
        if self.m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonPhysical("non-finite entry".into()));
        }
        let herm = self.hermiticity_deviation();
        if herm > T::tol(HERMITIAN_TOL) {
            return Err(Error::NonPhysical(format!("Hermiticity deviation {:e}", herm.as_f64())));
        }
        let tr = self.trace();
        if (tr.re - T::one()).abs() > T::tol(TRACE_TOL) || tr.im.abs() > T::tol(TRACE_TOL) {
            return Err(Error::NonPhysical(format!(
                "trace {}{:+}i differs from 1",
                tr.re.as_f64(),
                tr.im.as_f64()
            )));
        }
        let min = self.min_eigenvalue();
        if min < T::tol(MIN_EIGENVALUE) {
            return Err(Error::NonPhysical(format!("negative eigenvalue {:e}", min.as_f64())));
        }
        Ok(())
    }

    /// Same operator written in another basis: `ρ' = V ρ V†`.
    pub fn to_basis(&self, target: BasisTag) -> Self {
        if target == self.basis {
            return *self;
        }
        // Via the angular-momentum basis; all transforms are unitary.
        let back = from_angmom_transform::<T>(self.basis).adjoint();
        let fwd = from_angmom_transform::<T>(target);
        let v = fwd * back;
        Self { m: v * self.m * v.adjoint(), basis: target }
    }
}

/// `|ψ⟩⟨ψ|` in the angular-momentum basis.
pub fn density_from_pure<T: Real>(state: &AngMomState<T>) -> DensityMatrix6<T> {
    let a = state.alpha;
    DensityMatrix6 { m: a * a.adjoint(), basis: BasisTag::AngMom }
}

pub fn change_basis<T: Real>(rho: &DensityMatrix6<T>, target: BasisTag) -> DensityMatrix6<T> {
    rho.to_basis(target)
}

/// Dephasing-relevant subspace a pure state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubspaceLabel {
    /// Support on `{|ψ₃⁻⟩, |ψ₆⁻⟩}` only: the decoherence-free subspace.
    DFS,
    /// Support on `{|ψ₂⁻⟩, |ψ₄⁻⟩}` only.
    ED24,
    /// Support on `{|ψ₁⁻⟩, |ψ₅⁻⟩}` only.
    ED15,
    /// `α₁α₅ = α₂α₄ = 0`, some weight outside the DF subspace, and `|α₃| ≠ |α₆|`
    /// in the sense of a non-vanishing asymptotic coherence.
    FamilyI,
    Generic,
}

impl SubspaceLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SubspaceLabel::DFS => "DFS",
            SubspaceLabel::ED24 => "ED24",
            SubspaceLabel::ED15 => "ED15",
            SubspaceLabel::FamilyI => "FamilyI",
            SubspaceLabel::Generic => "Generic",
        }
    }
}

impl std::fmt::Display for SubspaceLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies `state` by its support; precedence is DFS > ED > FamilyI > Generic.
///
/// An amplitude counts as present when `|αₙ| > tol`.
pub fn classify_subspace<T: Real>(state: &AngMomState<T>, tol: T) -> SubspaceLabel {
    let on: [bool; 6] = std::array::from_fn(|i| cabs(state.alpha[i]) > tol);
    let only = |allowed: &[usize]| (0..6).all(|i| !on[i] || allowed.contains(&(i + 1)));

    if only(&[3, 6]) {
        return SubspaceLabel::DFS;
    }
    if only(&[2, 4]) {
        return SubspaceLabel::ED24;
    }
    if only(&[1, 5]) {
        return SubspaceLabel::ED15;
    }
    let pair15 = on[0] && on[4];
    let pair24 = on[1] && on[3];
    // The DF-only case was handled above, so some ED amplitude is present here.
    let k_inf = asymptotic_coherence_of(state.alpha[2], state.alpha[5]);
    if !pair15 && !pair24 && k_inf > tol {
        SubspaceLabel::FamilyI
    } else {
        SubspaceLabel::Generic
    }
}

/// `| |α₃|² − |α₆|² + 2i Im(α₃ α₆*) |`, equal to `|α₃² − α₆²|`.
pub(crate) fn asymptotic_coherence_of<T: Real>(a3: Complex<T>, a6: Complex<T>) -> T {
    let re = abs2(a3) - abs2(a6);
    let im = T::lit(2.0) * (a3 * a6.conj()).im;
    re.hypot(im)
}
