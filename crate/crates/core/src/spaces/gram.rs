use nalgebra::DMatrix;

use crate::rational_core::KernelFamily;
use crate::scalar::{binomial, cpowu, czero, factorial, falling, lit, to_f64, Cx, Real};

/// Condition number above which [`gram_h2`] flags the matrix.
pub const ILL_CONDITIONED: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct GramMatrix<T: Real> {
    pub matrix: DMatrix<Cx<T>>,
    /// Ratio of extreme eigenvalues.
    pub condition: T,
}

impl<T: Real> GramMatrix<T> {
    pub fn is_ill_conditioned(&self) -> bool {
        !(self.condition <= lit(ILL_CONDITIONED))
    }
}

/// `H^2` inner product `<k_{x,a}, k_{y,b}>` of two derivative kernels, i.e.
/// `d^a/d conj(x)^a d^b/dy^b (1 - conj(x) y)^{-1}`.
pub(crate) fn kernel_inner<T: Real>(x: Cx<T>, a: usize, y: Cx<T>, b: usize) -> Cx<T> {
    // sum_{t <= min(a,b)} C(a,t) (b)_t (a+b-t)! xb^{b-t} y^{a-t} / (1 - xb y)^{a+b+1-t}
    let xb = x.conj();
    let d = Cx::new(T::one(), T::zero()) - xb * y;
    let mut acc = czero();
    for t in 0..=a.min(b) {
        let coef = binomial::<T>(a, t) * falling::<T>(b, t) * factorial::<T>(a + b - t);
        let term = cpowu(xb, b - t) * cpowu(y, a - t) / cpowu(d, a + b + 1 - t);
        acc += term * coef;
    }
    acc
}

/// Gram matrix of the kernels `k_{lambda_i, j}` in `H^2`, in flat-index order.
///
/// Entry `(r, s)` is `<k_r, k_s>`. A condition number above
/// [`ILL_CONDITIONED`] is logged as a warning and reported in the result.
pub fn gram_h2<T: Real>(family: &KernelFamily<T>) -> GramMatrix<T> {
    let pairs = family.index_pairs();
    let n = pairs.len();
    let matrix = DMatrix::from_fn(n, n, |r, s| {
        let (x, a) = pairs[r];
        let (y, b) = pairs[s];
        kernel_inner(x, a, y, b)
    });
    let eig = nalgebra::SymmetricEigen::new(matrix.clone()).eigenvalues;
    let hi = eig.iter().fold(T::zero(), |m, &v| m.max(v));
    let lo = eig.iter().fold(hi, |m, &v| m.min(v));
    let condition = if lo > T::zero() { hi / lo } else { T::max_value().unwrap() };
    let g = GramMatrix { matrix, condition };
    if g.is_ill_conditioned() {
        log::warn!("H2 Gram matrix is ill-conditioned (estimate {:e})", to_f64(condition));
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational_core::{kernel_coeff, Node};
    use crate::scalar::cx;

    #[test]
    fn single_origin_node() {
        let g = gram_h2(&KernelFamily::<f64>::simple(&[cx(0.0, 0.0)]).unwrap());
        assert_eq!(g.matrix[(0, 0)], cx(1.0, 0.0));
    }

    #[test]
    fn two_simple_nodes() {
        let g = gram_h2(&KernelFamily::simple(&[cx(0.0, 0.0), cx(0.5, 0.0)]).unwrap());
        let want = [[1.0, 1.0], [1.0, 4.0 / 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.matrix[(i, j)] - cx(want[i][j], 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn derivative_entries_match_series() {
        let fam = KernelFamily::new(vec![
            Node::new(cx(0.4, 0.3), 3).unwrap(),
            Node::new(cx(-0.2, 0.5), 2).unwrap(),
            Node::new(cx(0.0, 0.0), 2).unwrap(),
        ])
        .unwrap();
        let g = gram_h2(&fam);
        let pairs = fam.index_pairs();
        for (r, &(x, a)) in pairs.iter().enumerate() {
            for (s, &(y, b)) in pairs.iter().enumerate() {
                let series: Cx<f64> = (0..600)
                    .map(|k| kernel_coeff(x, a, k) * kernel_coeff(y, b, k).conj())
                    .sum();
                assert!((g.matrix[(r, s)] - series).norm() < 1e-10, "({r},{s})");
            }
        }
        assert!(nalgebra::SymmetricEigen::new(g.matrix.clone())
            .eigenvalues
            .iter()
            .all(|&v| v > 0.0));
        assert!(!g.is_ill_conditioned());
    }
}
