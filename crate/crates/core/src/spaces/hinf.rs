//! Certified enclosure of `sup_{|z|=1} |f(z)|` for a polynomial `f`.

use crate::interval::Interval;
use crate::rational_core::Poly;
use crate::scalar::{cabs, cis, from_usize, lit, Cx, Real};

// Work cap on interval evaluations before the enclosure is returned wider
// than requested.
const MAX_EVALS: usize = 4_000_000;

struct Jet<T> {
    p: T,
    dp: T,
    d2p: T,
}

/// Value and first two derivatives of `P(theta) = |f(e^{i theta})|^2`.
fn jet<T: Real>(f: &Poly<T>, df: &Poly<T>, d2f: &Poly<T>, theta: T) -> Jet<T> {
    let z = cis(theta);
    let i = Cx::new(T::zero(), T::one());
    let g = f.eval(z);
    let g1 = i * z * df.eval(z);
    let g2 = -(z * df.eval(z)) - z * z * d2f.eval(z);
    let two = lit::<T>(2.0);
    Jet {
        p: g.norm_sqr(),
        dp: two * (g.conj() * g1).re,
        d2p: two * (g.conj() * g2).re + two * g1.norm_sqr(),
    }
}

/// Enclosure `[V, U]` of the sup norm with `U - V <= radius * max(1, V)`
/// (unless the evaluation budget runs out first).
///
/// `V` is the largest sampled modulus. `U` comes from covering the circle by
/// intervals on which `P = |f|^2` is bounded through its second-order Taylor
/// expansion plus Bernstein's inequality `|P'''| <= D^3 max P` for the
/// degree-`D` trigonometric polynomial `P`; `max P` is bounded a priori by the
/// squared sum of coefficient moduli.
pub fn hinf_norm_enclosure<T: Real>(f: &Poly<T>, radius: T) -> Interval<T> {
    let Some(d) = f.degree() else {
        return Interval::point(T::zero());
    };
    if d == 0 {
        return Interval::point(cabs(f.coeff(0)));
    }
    let df = f.derivative();
    let d2f = df.derivative();
    let l1 = f.l1_coeffs();
    let dd = from_usize::<T>(d);
    let third = dd * dd * dd * l1 * l1 / lit(6.0);
    let two_pi = T::two_pi();

    let n0 = (16 * d).max(64);
    let h = two_pi / from_usize::<T>(n0);
    let mut best = T::zero();
    let mut stack: Vec<(T, T, Jet<T>)> = Vec::with_capacity(n0);
    for s in 0..n0 {
        let c = h * from_usize::<T>(s);
        let j = jet(f, &df, &d2f, c);
        best = best.max(j.p);
        stack.push((c, h / lit(2.0), j));
    }
    let mut evals = n0;
    let mut upper_sq = T::zero();
    while let Some((c, half, j)) = stack.pop() {
        let v = best.sqrt();
        let target = v + radius * T::one().max(v);
        let bound = j.p + j.dp.abs() * half + j.d2p.abs() * half * half / lit(2.0)
            + third * half * half * half;
        if bound <= target * target || evals >= MAX_EVALS {
            upper_sq = upper_sq.max(bound);
            continue;
        }
        let q = half / lit(2.0);
        for cc in [c - q, c + q] {
            let jj = jet(f, &df, &d2f, cc);
            best = best.max(jj.p);
            stack.push((cc, q, jj));
        }
        evals += 2;
    }
    let lower = best.sqrt();
    Interval::new(lower, upper_sq.sqrt().min(l1).max(lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn sup_of_binomial() {
        // |1 + z/2| peaks at z = 1
        let f = Poly::from_real(&[1.0, 0.5]);
        let e = hinf_norm_enclosure(&f, 1e-9);
        assert!(e.contains(1.5) && e.width() <= 2e-9, "{e:?}");
    }

    #[test]
    fn sup_with_complex_coefficients() {
        let f = Poly::new(vec![cx(0.3, -0.1), cx(0.0, 0.8), cx(-0.5, 0.2), cx(0.1, 0.1)]);
        let e = hinf_norm_enclosure(&f, 1e-9);
        let dense = (0..400_000)
            .map(|s| f.eval(cis(2.0 * std::f64::consts::PI * s as f64 / 400_000.0)).norm())
            .fold(0.0f64, f64::max);
        assert!(e.lower <= dense + 1e-12 && dense <= e.upper, "{e:?} {dense}");
        assert!(e.width() <= 1e-8);
    }
}
