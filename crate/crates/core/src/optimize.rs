//! Derivative-free local minimization (Nelder-Mead with adaptive
//! coefficients) and the restart loop the multi-start searches share.

use crate::scalar::{from_usize, lit, Real};

#[derive(Debug, Clone)]
pub(crate) struct LocalMin<T> {
    pub x: Vec<T>,
    pub value: T,
    pub iterations: usize,
    pub converged: bool,
}

/// One Nelder-Mead run from `x0` with initial edge length `step`.
///
/// Stops when the spread of simplex values falls below `tol` relative to the
/// best value, or after `max_iter` iterations.
pub(crate) fn nelder_mead<T: Real, F: Fn(&[T]) -> T>(
    f: &F,
    x0: &[T],
    step: T,
    tol: T,
    max_iter: usize,
) -> LocalMin<T> {
    let d = x0.len();
    if d == 0 {
        return LocalMin { x: Vec::new(), value: f(x0), iterations: 0, converged: true };
    }
    let dn = from_usize::<T>(d);
    let one = T::one();
    let half = lit::<T>(0.5);
    // Gao-Han dimension-dependent coefficients
    let alpha = one;
    let beta = one + lit::<T>(2.0) / dn;
    let gamma = lit::<T>(0.75) - half / dn;
    let delta = one - one / dn;

    let eval = |x: &[T]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            T::max_value().unwrap()
        }
    };
    let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let tiny = lit::<T>(1e-300);
    let mut it = 0;
    let mut converged = false;
    while it < max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[d].1;
        if worst - best <= tol * (best.abs() + tiny) {
            let diam = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter().zip(&simplex[0].0).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
                })
                .fold(T::zero(), |m, v| m.max(v));
            let scale = simplex[0].0.iter().fold(one, |m, v| m.max(v.abs()));
            if diam <= tol.sqrt() * scale {
                converged = true;
                break;
            }
        }
        it += 1;
        let mut centroid = vec![T::zero(); d];
        for (x, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += *v / dn;
            }
        }
        let along = |t: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&simplex[d].0)
                .map(|(c, w)| *c + t * (*c - *w))
                .collect()
        };
        let xr = along(alpha);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(beta);
            let fe = eval(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let x = along(gamma);
            let v = eval(&x);
            (x, v)
        } else {
            let x = along(-gamma);
            let v = eval(&x);
            (x, v)
        };
        if fc < fr.min(worst) {
            simplex[d] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for (x, v) in simplex[1..].iter_mut() {
            for (xi, bi) in x.iter_mut().zip(&x_best) {
                *xi = *bi + delta * (*xi - *bi);
            }
            *v = eval(x);
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, value) = simplex.swap_remove(0);
    LocalMin { x, value, iterations: it, converged }
}

/// Repeats Nelder-Mead from the incumbent with a fresh simplex until a round
/// improves the value by less than `tol` (relative). The step shrinks between
/// rounds. Total iterations are capped by `max_iter`.
pub(crate) fn nelder_mead_restarted<T: Real, F: Fn(&[T]) -> T>(
    f: &F,
    x0: &[T],
    step: T,
    tol: T,
    max_iter: usize,
) -> LocalMin<T> {
    let mut cur = nelder_mead(f, x0, step, tol, max_iter);
    let mut used = cur.iterations;
    let mut s = step;
    let mut stalled = false;
    for _ in 0..12 {
        if used >= max_iter {
            break;
        }
        s = s * lit(0.3);
        let scale = cur.x.iter().fold(T::one(), |m, v| m.max(v.abs()));
        let next = nelder_mead(f, &cur.x, s.max(lit::<T>(1e-7) * scale), tol, max_iter - used);
        used += next.iterations;
        let gain = cur.value - next.value;
        let improved = next.value < cur.value;
        if improved {
            cur = LocalMin { converged: next.converged, ..next };
        }
        if !improved || gain <= tol * (cur.value.abs() + lit(1e-300)) {
            stalled = true;
            break;
        }
    }
    cur.iterations = used;
    cur.converged = cur.converged || stalled;
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead_restarted(&f, &[-1.2, 1.0], 0.5, 1e-12, 20_000);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] - 1.0).abs() < 1e-4, "{r:?}");
    }

    #[test]
    fn minimizes_nonsmooth_max() {
        let f = |x: &[f64]| (x[0] - 1.0).abs().max((x[1] + 2.0).abs()) + 0.1 * (x[0] + x[1]).abs();
        let r = nelder_mead_restarted(&f, &[5.0, 5.0], 1.0, 1e-12, 20_000);
        assert!(r.value < 0.1 + 1e-6, "{r:?}");
    }
}
