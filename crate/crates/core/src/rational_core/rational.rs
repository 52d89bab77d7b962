use crate::error::{Error, Result};
use crate::scalar::{cabs, lit, Cx, Real};

use super::poly::Poly;

/// Distance under which a numerator root and a denominator root cancel.
pub const REDUCE_TOL: f64 = 1e-10;

/// Quotient `num / den` kept in reduced form.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn<T: Real> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Real> RationalFn<T> {
    /// Builds `num / den`, cancelling common roots that agree within
    /// [`REDUCE_TOL`].
    pub fn new(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RationalFn { num, den: Poly::one() });
        }
        let (mut num, mut den) = (num, den);
        let tol: T = lit(REDUCE_TOL);
        loop {
            if den.degree() == Some(0) || num.degree() == Some(0) {
                break;
            }
            let dr = den.roots();
            let nr = num.roots();
            let common = dr
                .iter()
                .find(|d| nr.iter().any(|n| cabs(*n - **d) <= tol))
                .copied();
            match common {
                Some(r) => {
                    let f = Poly::linear_factor(r);
                    num = num.div_rem(&f).0;
                    den = den.div_rem(&f).0;
                }
                None => break,
            }
        }
        Ok(RationalFn { num, den })
    }

    /// Wraps a polynomial without a root search.
    pub fn from_poly(p: Poly<T>) -> Self {
        RationalFn { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Roots of the denominator, with multiplicity.
    pub fn poles(&self) -> Vec<Cx<T>> {
        self.den.roots()
    }

    /// Product of two reduced functions, reduced again.
    pub fn mul(&self, other: &RationalFn<T>) -> Result<Self> {
        RationalFn::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn scale(&self, c: Cx<T>) -> Self {
        RationalFn { num: self.num.scale(c), den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn common_factor_cancels() {
        // (z - 0.5)(z + 1) / ((z - 0.5)(z - 3))
        let r = cx(0.5, 0.0);
        let num = &Poly::linear_factor(r) * &Poly::linear_factor(cx(-1.0, 0.0));
        let den = &Poly::linear_factor(r) * &Poly::linear_factor(cx(3.0, 0.0));
        let f = RationalFn::new(num, den).unwrap();
        assert_eq!(f.num().degree(), Some(1));
        assert_eq!(f.den().degree(), Some(1));
        let z = cx(0.1, 0.2);
        let want = (z + 1.0) / (z - 3.0);
        assert!((f.eval(z) - want).norm() < 1e-14);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFn::<f64>::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn distinct_roots_survive() {
        let num = Poly::linear_factor(cx(0.5, 0.0));
        let den = Poly::linear_factor(cx(0.5 + 1e-6, 0.0));
        let f = RationalFn::new(num, den).unwrap();
        assert_eq!(f.den().degree(), Some(1));
    }
}
