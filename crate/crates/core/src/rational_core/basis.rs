use crate::error::Result;
use crate::scalar::{cabs, cone, cpowu, czero, falling, Cx, Real};

use super::node::{check_inside, KernelFamily};
use super::poly::Poly;
use super::rational::RationalFn;

/// Disk automorphism `(z - lambda) / (1 - conj(lambda) z)`.
pub fn blaschke_factor<T: Real>(lambda: Cx<T>) -> Result<RationalFn<T>> {
    check_inside(lambda)?;
    RationalFn::new(
        Poly::linear_factor(lambda),
        Poly::new(vec![cone(), -lambda.conj()]),
    )
}

/// Finite Blaschke product with each factor repeated by node multiplicity.
pub fn blaschke_product<T: Real>(family: &KernelFamily<T>) -> Result<RationalFn<T>> {
    let ex = family.expanded();
    let den = ex.iter().fold(Poly::one(), |acc, l| {
        &acc * &Poly::new(vec![cone(), -l.conj()])
    });
    RationalFn::new(Poly::from_roots(&ex), den)
}

/// `k`-th Taylor coefficient of the kernel `(d/d conj(lambda))^j (1 - conj(lambda) z)^{-1}`.
///
/// Equals `k (k-1) ... (k-j+1) conj(lambda)^{k-j}` for `k >= j` and zero
/// otherwise; at `lambda = 0` only `k = j` survives, with value `j!`.
pub fn kernel_coeff<T: Real>(lambda: Cx<T>, j: usize, k: usize) -> Cx<T> {
    if k < j {
        return czero();
    }
    cpowu(lambda.conj(), k - j) * falling::<T>(k, j)
}

/// Malmquist-Walsh orthonormal basis of the model space.
///
/// `e_j = (1 - |l_j|^2)^{1/2} / (1 - conj(l_j) z) * prod_{i<j} b_{l_i}` over the
/// multiplicity-expanded node list; a repeated node simply repeats in the
/// formula, which keeps the family orthonormal.
pub fn malmquist_walsh<T: Real>(family: &KernelFamily<T>) -> Result<Vec<RationalFn<T>>> {
    let ex = family.expanded();
    let mut out = Vec::with_capacity(ex.len());
    let mut partial_num = Poly::one();
    let mut partial_den = Poly::one();
    for &l in &ex {
        let norm = (T::one() - cabs(l) * cabs(l)).sqrt();
        let num = partial_num.scale(Cx::new(norm, T::zero()));
        let den = &partial_den * &Poly::new(vec![cone(), -l.conj()]);
        out.push(RationalFn::new(num, den)?);
        partial_num = &partial_num * &Poly::linear_factor(l);
        partial_den = &partial_den * &Poly::new(vec![cone(), -l.conj()]);
    }
    Ok(out)
}
