//! Small dense helpers on 6×6 complex matrices.

use nalgebra::{Complex, Matrix6, SymmetricEigen, Vector6, SVD};

use crate::scalar::{cabs, creal, Real};

pub type CMatrix6<T> = Matrix6<Complex<T>>;
pub type CVector6<T> = Vector6<Complex<T>>;

/// Largest elementwise deviation `max |m_ij - conj(m_ji)|`.
pub fn hermiticity_deviation<T: Real>(m: &CMatrix6<T>) -> T {
    let mut dev = T::zero();
    for i in 0..6 {
        for j in i..6 {
            dev = dev.max(cabs(m[(i, j)] - m[(j, i)].conj()));
        }
    }
    dev
}

pub fn hermitian_part<T: Real>(m: &CMatrix6<T>) -> CMatrix6<T> {
    (m + m.adjoint()) * creal(T::lit(0.5))
}

/// Zeroes entries below `eps² · max|m_ij|`.
///
/// The nalgebra complex reductions lose accuracy on subnormal entries (seen
/// as eigenvalue errors of order 1e−6 on strongly dephased states). Dropping
/// entries this small moves any eigen- or singular value by far less than
/// the solvers' own round-off.
pub fn flush_negligible<T: Real>(m: &CMatrix6<T>) -> CMatrix6<T> {
    let scale = m.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)));
    let cutoff = scale * T::EPSILON * T::EPSILON;
    m.map(|z| if cabs(z) < cutoff { Complex::new(T::zero(), T::zero()) } else { z })
}

/// Eigenvalues (ascending) and eigenvectors (columns) of the Hermitian part of `m`.
pub fn hermitian_eigen<T: Real>(m: &CMatrix6<T>) -> (Vector6<T>, CMatrix6<T>) {
    let eig = SymmetricEigen::new(flush_negligible(&hermitian_part(m)));
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = Vector6::from_fn(|i, _| eig.eigenvalues[order[i]]);
    let vecs = CMatrix6::from_fn(|r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix6<T>) -> Vector6<T> {
    hermitian_eigen(m).0
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues at or below `floor` are treated as exact zeros; this removes
/// the `sqrt(eps)` noise that round-off eigenvalues of rank-deficient inputs
/// would otherwise inject.
pub fn psd_sqrt<T: Real>(m: &CMatrix6<T>, floor: T) -> CMatrix6<T> {
    let (vals, vecs) = hermitian_eigen(m);
    let roots = CVector6::from_fn(|i, _| {
        if vals[i] > floor {
            creal(vals[i].sqrt())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    &vecs * CMatrix6::from_diagonal(&roots) * vecs.adjoint()
}

/// Singular values in descending order.
pub fn singular_values_desc<T: Real>(m: &CMatrix6<T>) -> [T; 6] {
    let svd = SVD::new(flush_negligible(m), false, false);
    let mut sv = [T::zero(); 6];
    for (dst, src) in sv.iter_mut().zip(svd.singular_values.iter()) {
        *dst = *src;
    }
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}
