use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational_core::{KernelFamily, Poly};
use crate::scalar::{cabs, czero, lit, Cx, Real};

use super::hinf::hinf_norm_enclosure;
use super::spec::{coefficient_weight, Exponent, KernelCombo, SpaceSpec};
use super::tail::{enclose, tail_norm_bound, weighted_norm, TailTerm};

/// Largest truncation index tried before giving up on a tolerance.
pub const K_MAX: usize = 1_000_000;

/// Error radius requested from the `H^infinity` sup-norm enclosure.
pub const HINF_RADIUS: f64 = 1e-9;

/// Norm of a polynomial in `X`.
///
/// Exact for the weighted sequence spaces. For `H^infinity` this is the upper
/// end of a certified enclosure of `sup |f|` on the circle whose width is at
/// most `HINF_RADIUS * max(1, |f|)`.
pub fn x_norm_poly<T: Real>(space: &SpaceSpec<T>, f: &Poly<T>) -> T {
    match *space {
        SpaceSpec::BeurlingSobolev { q, beta } => weighted_norm(f.coeffs(), beta, q),
        SpaceSpec::HInfinity => hinf_norm_enclosure(f, lit(HINF_RADIUS)).upper,
    }
}

/// Weighted Taylor coefficients of each kernel in a family, truncated at
/// `k_last`, together with per-kernel tail bounds in the predual norm.
///
/// Row `k` holds `w_k * coeff_k(k_{lambda_i, j})`, so the head of the predual
/// norm of `sum alpha k` is the plain `l^p` norm of `table * alpha`.
#[derive(Debug, Clone)]
pub struct PredualTable<T: Real> {
    p: Exponent<T>,
    weighted: DMatrix<Cx<T>>,
    tails: Vec<T>,
}

impl<T: Real> PredualTable<T> {
    pub fn build(space: &SpaceSpec<T>, family: &KernelFamily<T>, k_last: usize) -> Result<Self> {
        let p = space
            .predual_exponent()
            .ok_or_else(|| Error::UnsupportedSpace(space.to_string()))?;
        let y_beta = -space.beta();
        let pairs = family.index_pairs();
        let jmax = pairs.iter().map(|x| x.1).max().unwrap_or(0);
        let k_last = k_last.max(jmax);
        let n = pairs.len();
        let mut weighted = DMatrix::from_element(k_last + 1, n, czero());
        for (col, &(l, j)) in pairs.iter().enumerate() {
            let lc = l.conj();
            // running power conj(l)^{k-j}
            let mut pw = Cx::new(T::one(), T::zero());
            for k in j..=k_last {
                if k > j {
                    pw *= lc;
                }
                let f = crate::scalar::falling::<T>(k, j);
                weighted[(k, col)] = pw * (f * coefficient_weight(k, y_beta));
            }
        }
        let tails = pairs
            .iter()
            .map(|&(l, j)| {
                let rho = cabs(l);
                if rho == T::zero() {
                    return T::zero();
                }
                let term = TailTerm {
                    amp: rho.powi(-(j as i32)),
                    shift: 0,
                    power: crate::scalar::from_usize(j),
                    base: rho,
                };
                tail_norm_bound(&[term], y_beta, p, k_last).unwrap_or(T::max_value().unwrap())
            })
            .collect();
        Ok(PredualTable { p, weighted, tails })
    }

    /// Grows the truncation until every kernel's tail bound is at most `unit_tol`.
    pub fn for_tolerance(
        space: &SpaceSpec<T>,
        family: &KernelFamily<T>,
        unit_tol: T,
    ) -> Result<Self> {
        let mut k = 63;
        loop {
            let t = PredualTable::build(space, family, k)?;
            if t.max_tail() <= unit_tol {
                return Ok(t);
            }
            k = 2 * k + 1;
            if k > K_MAX {
                return Err(Error::NoConvergence(format!(
                    "predual tail above {} after {K_MAX} terms",
                    crate::scalar::to_f64(unit_tol)
                )));
            }
        }
    }

    pub fn k_last(&self) -> usize {
        self.weighted.nrows() - 1
    }

    pub fn exponent(&self) -> Exponent<T> {
        self.p
    }

    pub fn max_tail(&self) -> T {
        self.tails.iter().fold(T::zero(), |a, &b| a.max(b))
    }

    /// Weighted head coefficients of `sum alpha k`.
    pub fn head_coeffs(&self, alpha: &[Cx<T>]) -> DVector<Cx<T>> {
        &self.weighted * DVector::from_column_slice(alpha)
    }

    /// Norm of the truncated series (the lower end of [`Self::enclosure`]).
    pub fn head_norm(&self, alpha: &[Cx<T>]) -> T {
        weighted_norm(self.head_coeffs(alpha).as_slice(), T::zero(), self.p)
    }

    pub fn tail_bound(&self, alpha: &[Cx<T>]) -> T {
        alpha.iter().zip(&self.tails).fold(T::zero(), |s, (&a, &t)| {
            if a == czero() {
                s
            } else {
                s + cabs(a) * t
            }
        })
    }

    /// Certified enclosure of the predual norm of `sum alpha k`.
    pub fn enclosure(&self, alpha: &[Cx<T>]) -> Interval<T> {
        enclose(self.head_norm(alpha), self.tail_bound(alpha), self.p)
    }
}

/// Enclosure of the predual norm of a kernel combination, of width at most `tol`.
///
/// The combination's coefficients are summed in closed form up to a
/// truncation index that doubles until the Minkowski tail bound fits the
/// tolerance.
pub fn y_norm_combo<T: Real>(
    space: &SpaceSpec<T>,
    combo: &KernelCombo<T>,
    tol: T,
) -> Result<Interval<T>> {
    if space.is_hinfinity() {
        return Err(Error::UnsupportedSpace(space.to_string()));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut k = 63;
    loop {
        let table = PredualTable::build(space, combo.family(), k)?;
        let enc = table.enclosure(combo.alpha());
        if enc.width() <= tol {
            return Ok(enc);
        }
        k = 2 * k + 1;
        if k > K_MAX {
            return Err(Error::NoConvergence(format!(
                "enclosure width {} after {K_MAX} terms",
                crate::scalar::to_f64(enc.width())
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational_core::Node;
    use crate::scalar::cx;

    fn fam(ls: &[Cx<f64>]) -> KernelFamily<f64> {
        KernelFamily::simple(ls).unwrap()
    }

    #[test]
    fn wiener_norm_of_polynomial() {
        let f = Poly::from_real(&[1.0f64, 0.5]);
        assert!((x_norm_poly(&SpaceSpec::wiener(), &f) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn weighted_hilbert_norm() {
        let s = SpaceSpec::beurling_sobolev(Exponent::Finite(2.0), 1.0).unwrap();
        let f = Poly::from_real(&[0.0, 1.0, 1.0]);
        assert!((x_norm_poly(&s, &f) - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hinf_norm_of_monomials() {
        for k in [0usize, 1, 5, 12] {
            let v = x_norm_poly(&SpaceSpec::hinfinity(), &Poly::<f64>::monomial(k));
            assert!((v - 1.0).abs() <= 1e-8, "k={k} v={v}");
            assert!(v >= 1.0);
        }
    }

    #[test]
    fn wiener_predual_single_kernel() {
        let c = KernelCombo::new(fam(&[cx(0.5, 0.0)]), vec![cx(1.0, 0.0)]).unwrap();
        let e = y_norm_combo(&SpaceSpec::wiener(), &c, 1e-12).unwrap();
        assert!(e.contains(1.0) || (e.lower - 1.0f64).abs() < 1e-15);
    }

    #[test]
    fn constant_kernel_in_l1_predual() {
        let s = SpaceSpec::beurling_sobolev(Exponent::Infinite, 0.0).unwrap();
        let c = KernelCombo::new(fam(&[cx(0.0, 0.0)]), vec![cx(1.0, 0.0)]).unwrap();
        let e = y_norm_combo(&s, &c, 1e-12).unwrap();
        assert_eq!((e.lower, e.upper), (1.0, 1.0));
    }

    #[test]
    fn hardy_predual_matches_gram_form() {
        let ls = [cx(0.3, 0.2), cx(-0.5, 0.1), cx(0.0, -0.7)];
        let alpha = vec![cx(1.0, -0.5), cx(0.2, 0.3), cx(-0.4, 0.0)];
        let c = KernelCombo::new(fam(&ls), alpha.clone()).unwrap();
        let e = y_norm_combo(&SpaceSpec::hardy2(), &c, 1e-10).unwrap();
        let mut q = cx(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                q += alpha[i] * alpha[j].conj() / (1.0 - ls[i].conj() * ls[j]);
            }
        }
        let want = q.re.sqrt();
        assert!(e.lower <= want + 1e-12 && want <= e.upper + 1e-12, "{e:?} vs {want}");
        assert!(e.width() <= 1e-10);
    }

    #[test]
    fn hinfinity_predual_rejected() {
        let c = KernelCombo::new(fam(&[cx(0.1, 0.0)]), vec![cx(1.0, 0.0)]).unwrap();
        assert!(matches!(
            y_norm_combo(&SpaceSpec::hinfinity(), &c, 1e-8),
            Err(Error::UnsupportedSpace(_))
        ));
    }

    #[test]
    fn derivative_kernels_are_enclosed() {
        let family = KernelFamily::new(vec![
            Node::new(cx(0.6, -0.3), 3).unwrap(),
            Node::simple(cx(0.0, 0.0)).unwrap(),
        ])
        .unwrap();
        let alpha = vec![cx(0.3, 0.1), cx(-0.2, 0.0), cx(0.05, 0.02), cx(1.0, 0.0)];
        // X = l^{4/3}_A(1/2), predual exponent 4 with weights k^{-1/2}
        let s = SpaceSpec::beurling_sobolev(Exponent::Finite(4.0 / 3.0), 0.5).unwrap();
        let c = KernelCombo::new(family, alpha).unwrap();
        let e = y_norm_combo(&s, &c, 1e-9).unwrap();
        let brute: f64 = (0..20_000)
            .map(|k| {
                let w = if k == 0 { 1.0 } else { (k as f64).powf(-0.5) };
                (w * c.coeff(k).norm()).powi(4)
            })
            .sum::<f64>()
            .powf(0.25);
        assert!(e.lower - 1e-12 <= brute && brute <= e.upper + 1e-12, "{e:?} {brute}");
    }
}
