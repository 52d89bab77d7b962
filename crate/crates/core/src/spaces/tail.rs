//! Weighted sequence norms of Taylor coefficient sequences with certified
//! truncation.

use crate::interval::Interval;
use crate::scalar::{cabs, from_usize, Cx, Real};

use super::spec::{coefficient_weight, Exponent};

/// Majorant `amp * (k + shift)^power * base^k`, valid for every `k` past the
/// head of a coefficient sequence.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TailTerm<T> {
    pub amp: T,
    pub shift: usize,
    pub power: T,
    pub base: T,
}

/// Bound on `sum_{k >= k0} k^s (k+c)^a q^k` (or its supremum when `sup` is
/// set) by the ratio test. `None` when the ratio at `k0` is not below one.
fn ratio_tail<T: Real>(k0: usize, s: T, c: usize, a: T, q: T, sup: bool) -> Option<T> {
    debug_assert!(k0 >= 1);
    if q == T::zero() {
        return Some(T::zero());
    }
    let k = from_usize::<T>(k0);
    let kc = from_usize::<T>(k0 + c);
    let one = T::one();
    let grow_s = if s > T::zero() { ((k + one) / k).powf(s) } else { one };
    let grow_a = if a > T::zero() { ((kc + one) / kc).powf(a) } else { one };
    let rho = grow_s * grow_a * q;
    let first = (s * k.ln() + a * kc.ln() + k * q.ln()).exp();
    if sup {
        (rho <= one).then_some(first)
    } else {
        (rho < one).then(|| first / (one - rho))
    }
}

/// Bound on the weighted `l^p` norm of the tail `k > k_last` of a sequence
/// dominated by the sum of `terms`, using Minkowski's inequality.
pub(crate) fn tail_norm_bound<T: Real>(
    terms: &[TailTerm<T>],
    y_beta: T,
    p: Exponent<T>,
    k_last: usize,
) -> Option<T> {
    let k0 = k_last + 1;
    let mut total = T::zero();
    for t in terms {
        if t.amp == T::zero() || t.base == T::zero() {
            continue;
        }
        let part = match p {
            Exponent::Infinite => ratio_tail(k0, y_beta, t.shift, t.power, t.base, true)?,
            Exponent::Finite(p) => {
                let s = ratio_tail(k0, y_beta * p, t.shift, t.power * p, t.base.powf(p), false)?;
                s.powf(T::one() / p)
            }
        };
        total += t.amp * part;
    }
    Some(total)
}

/// Weighted `l^p` norm of a finite coefficient vector with weights
/// `1, 1^e, 2^e, ...`.
pub(crate) fn weighted_norm<T: Real>(coeffs: &[Cx<T>], e: T, p: Exponent<T>) -> T {
    match p {
        Exponent::Infinite => coeffs
            .iter()
            .enumerate()
            .fold(T::zero(), |m, (k, &c)| m.max(coefficient_weight(k, e) * cabs(c))),
        Exponent::Finite(p) if p == T::one() => coeffs
            .iter()
            .enumerate()
            .fold(T::zero(), |s, (k, &c)| s + coefficient_weight(k, e) * cabs(c)),
        Exponent::Finite(p) => {
            // scale by the largest entry so high powers do not underflow
            let big = coeffs
                .iter()
                .enumerate()
                .fold(T::zero(), |m, (k, &c)| m.max(coefficient_weight(k, e) * cabs(c)));
            if big == T::zero() {
                return T::zero();
            }
            let s = coeffs.iter().enumerate().fold(T::zero(), |s, (k, &c)| {
                s + (coefficient_weight(k, e) * cabs(c) / big).powf(p)
            });
            big * s.powf(T::one() / p)
        }
    }
}

/// Enclosure of the full weighted norm from an exactly known head and a tail
/// bound.
pub(crate) fn enclose<T: Real>(head: T, tail: T, p: Exponent<T>) -> Interval<T> {
    let upper = match p {
        Exponent::Infinite => head.max(tail),
        Exponent::Finite(p) if p == T::one() => head + tail,
        Exponent::Finite(_) => {
            // (H^p + T^p)^{1/p} <= H + T; the hypot-style form avoids overflow
            let big = head.max(tail);
            if big == T::zero() {
                T::zero()
            } else if let Exponent::Finite(p) = p {
                big * ((head / big).powf(p) + (tail / big).powf(p)).powf(T::one() / p)
            } else {
                unreachable!()
            }
        }
    };
    Interval::new(head, upper.max(head))
}
