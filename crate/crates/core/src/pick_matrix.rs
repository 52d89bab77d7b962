//! Pick-matrix criteria for `H^infinity` and `H^2` interpolation.
//!
//! With `Q_ij = 1 / (1 - conj(l_i) l_j)` and `B_ij = conj(w_i) w_j Q_ij`,
//! a function of sup norm at most `C` interpolating `w` exists iff
//! `C^2 Q - B` is positive semidefinite. The least such `C` squared is the
//! top generalized eigenvalue of `(B, Q)`.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::rational_core::KernelFamily;
use crate::scalar::{cone, lit, to_f64, Cx, Real};
use crate::spaces::{gram_h2, ILL_CONDITIONED};

#[derive(Debug, Clone)]
pub struct PickReport<T: Real> {
    pub c_min: T,
    pub q: CMatrix<T>,
    pub b: CMatrix<T>,
}

impl<T: Real> PickReport<T> {
    /// Smallest eigenvalue of `c^2 Q - B`; nonnegative iff `c >= c_min`
    /// (up to rounding).
    pub fn psd_margin_at(&self, c: T) -> T {
        let m = &self.q * Cx::new(c * c, T::zero()) - &self.b;
        min_eigenvalue(hermitize(m))
    }

    /// Largest eigenvalue magnitude of `Q`, the scale for margins.
    pub fn q_norm(&self) -> T {
        SymmetricEigen::new(self.q.clone())
            .eigenvalues
            .iter()
            .fold(T::zero(), |m, &v| m.max(v.abs()))
    }
}

fn hermitize<T: Real>(m: CMatrix<T>) -> CMatrix<T> {
    let h = m.adjoint();
    (m + h) * Cx::new(lit::<T>(0.5), T::zero())
}

fn min_eigenvalue<T: Real>(m: CMatrix<T>) -> T {
    let e = SymmetricEigen::new(m).eigenvalues;
    e.iter().fold(T::max_value().unwrap(), |a, &b| a.min(b))
}

fn check_targets<T: Real>(family: &KernelFamily<T>, w: &[Cx<T>]) -> Result<()> {
    if w.len() != family.total_dim() {
        return Err(Error::InvalidInput(format!(
            "{} targets for {} nodes",
            w.len(),
            family.total_dim()
        )));
    }
    Ok(())
}

fn cholesky<T: Real>(q: &CMatrix<T>) -> Result<Cholesky<Cx<T>, nalgebra::Dyn>> {
    Cholesky::new(q.clone())
        .ok_or_else(|| Error::DegenerateNodes("Pick matrix Q is not positive definite".into()))
}

fn warn_condition<T: Real>(q: &CMatrix<T>) {
    let e = SymmetricEigen::new(q.clone()).eigenvalues;
    let hi = e.iter().fold(T::zero(), |m, &v| m.max(v));
    let lo = e.iter().fold(hi, |m, &v| m.min(v));
    if !(hi <= lit::<T>(ILL_CONDITIONED) * lo) {
        log::warn!(
            "Pick matrix is ill-conditioned (eigenvalues {:e} .. {:e})",
            to_f64(lo),
            to_f64(hi)
        );
    }
}

/// Least `C` with `C^2 Q - B` positive semidefinite (simple nodes only).
pub fn pick_min_c_hinf<T: Real>(family: &KernelFamily<T>, w: &[Cx<T>]) -> Result<PickReport<T>> {
    if !family.is_simple() {
        return Err(Error::DegenerateNodes(
            "Pick criterion needs distinct simple nodes; use the model-matrix route".into(),
        ));
    }
    check_targets(family, w)?;
    let l = family.expanded();
    let n = l.len();
    let q = DMatrix::from_fn(n, n, |i, j| cone::<T>() / (cone::<T>() - l[i].conj() * l[j]));
    let b = DMatrix::from_fn(n, n, |i, j| w[i].conj() * w[j] * q[(i, j)]);
    warn_condition(&q);
    let chol = cholesky(&q)?;
    // congruence: L^{-1} B L^{-H} has the generalized eigenvalues of (B, Q)
    let lower = chol.l();
    let x = lower
        .solve_lower_triangular(&b)
        .ok_or_else(|| Error::DegenerateNodes("singular Cholesky factor".into()))?;
    let y = lower
        .solve_lower_triangular(&x.adjoint())
        .ok_or_else(|| Error::DegenerateNodes("singular Cholesky factor".into()))?;
    let top = SymmetricEigen::new(hermitize(y))
        .eigenvalues
        .iter()
        .fold(T::zero(), |m, &v| m.max(v));
    Ok(PickReport { c_min: top.max(T::zero()).sqrt(), q, b })
}

/// Minimal `H^2` norm of an interpolant, `sqrt(conj(w)^H G^{-1} conj(w))`
/// with `G` the kernel Gram matrix (the Pick matrix `Q` for simple nodes).
pub fn pick_min_c_h2<T: Real>(family: &KernelFamily<T>, w: &[Cx<T>]) -> Result<T> {
    check_targets(family, w)?;
    let g = gram_h2(family).matrix;
    let chol = cholesky(&g)?;
    let wt = DVector::from_iterator(w.len(), w.iter().map(|z| z.conj()));
    let x = chol.solve(&wt);
    Ok(wt.dotc(&x).re.max(T::zero()).sqrt())
}

/// `H^2` form of the criterion: `C^2 Q - conj(w) w^T` is positive
/// semidefinite iff an interpolant of `H^2` norm at most `C` exists.
pub fn pick_report_h2<T: Real>(family: &KernelFamily<T>, w: &[Cx<T>]) -> Result<PickReport<T>> {
    if !family.is_simple() {
        return Err(Error::DegenerateNodes("Pick form needs distinct simple nodes".into()));
    }
    let c_min = pick_min_c_h2(family, w)?;
    let l = family.expanded();
    let n = l.len();
    let q = DMatrix::from_fn(n, n, |i, j| cone::<T>() / (cone::<T>() - l[i].conj() * l[j]));
    let b = DMatrix::from_fn(n, n, |i, j| w[i].conj() * w[j]);
    Ok(PickReport { c_min, q, b })
}
