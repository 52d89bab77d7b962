//! Small dense complex linear-algebra helpers.

use nalgebra::DMatrix;

use crate::rational_core::Poly;
use crate::scalar::{cabs, Cx, Real};

pub type CMatrix<T> = DMatrix<Cx<T>>;

/// Induced matrix norms that the bound harness can check cheaply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormId {
    /// Largest singular value (induced by the Euclidean norm).
    Spectral,
    /// Maximum absolute row sum (induced by the sup norm).
    RowSum,
    /// Maximum absolute column sum (induced by the `l^1` norm).
    ColSum,
}

pub fn spectral_norm<T: Real>(a: &CMatrix<T>) -> T {
    if a.is_empty() {
        return T::zero();
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(T::zero(), |m, &s| m.max(s))
}

pub fn induced_norm<T: Real>(a: &CMatrix<T>, id: NormId) -> T {
    match id {
        NormId::Spectral => spectral_norm(a),
        NormId::RowSum => (0..a.nrows())
            .map(|i| a.row(i).iter().fold(T::zero(), |s, &z| s + cabs(z)))
            .fold(T::zero(), |m, v| m.max(v)),
        NormId::ColSum => (0..a.ncols())
            .map(|j| a.column(j).iter().fold(T::zero(), |s, &z| s + cabs(z)))
            .fold(T::zero(), |m, v| m.max(v)),
    }
}

/// `p(A)` by Horner's rule.
pub fn poly_of_matrix<T: Real>(p: &Poly<T>, a: &CMatrix<T>) -> CMatrix<T> {
    let n = a.nrows();
    let mut acc = CMatrix::<T>::zeros(n, n);
    for &c in p.coeffs().iter().rev() {
        acc = &acc * a;
        for i in 0..n {
            acc[(i, i)] += c;
        }
    }
    acc
}

pub fn is_lower_triangular<T: Real>(a: &CMatrix<T>) -> bool {
    (0..a.nrows()).all(|i| (i + 1..a.ncols()).all(|j| a[(i, j)] == Cx::new(T::zero(), T::zero())))
}

pub fn is_upper_triangular<T: Real>(a: &CMatrix<T>) -> bool {
    (0..a.nrows()).all(|i| (0..i.min(a.ncols())).all(|j| a[(i, j)] == Cx::new(T::zero(), T::zero())))
}

/// Eigenvalues; read off the diagonal for triangular input.
pub fn eigenvalues<T: Real>(a: &CMatrix<T>) -> Vec<Cx<T>> {
    if is_lower_triangular(a) || is_upper_triangular(a) {
        return a.diagonal().iter().copied().collect();
    }
    nalgebra::Schur::new(a.clone())
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default()
}

/// Numerical rank with singular values compared against `tol * max(1, s_max)`.
pub fn rank<T: Real>(a: &CMatrix<T>, tol: T) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let top = sv.iter().fold(T::zero(), |m, &s| m.max(s));
    let cut = tol * T::one().max(top);
    sv.iter().filter(|&&s| s > cut).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn induced_norms_of_small_matrix() {
        let a = CMatrix::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(0.0, -2.0), cx(0.5, 0.0), cx(0.0, 0.0)]);
        assert_eq!(induced_norm(&a, NormId::RowSum), 3.0);
        assert_eq!(induced_norm(&a, NormId::ColSum), 2.0);
        let s = spectral_norm(&a);
        assert!(s > 2.0 && s < 3.0);
    }

    #[test]
    fn horner_on_matrices() {
        let a = CMatrix::from_row_slice(2, 2, &[cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)]);
        // 1 + 2z + 3z^2 with a nilpotent z
        let p = Poly::from_real(&[1.0, 2.0, 3.0]);
        let r = poly_of_matrix(&p, &a);
        assert_eq!(r[(0, 0)], cx(1.0, 0.0));
        assert_eq!(r[(1, 0)], cx(2.0, 0.0));
    }
}
