//! Upper bounds on the interpolation norm from explicit polynomial
//! interpolants.
//!
//! Every polynomial of degree at most `D` that meets the constraints is
//! `f = h + m u`, with `h` the Hermite interpolant of degree `n - 1`, `m` the
//! node polynomial and `u` free of degree at most `D - n`. The coefficients
//! (or circle samples) of `f` are affine in `u`, so minimizing the norm is a
//! convex problem without constraints. Whatever point the minimizer returns,
//! its exact norm is a valid upper bound.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result, SolveError};
use crate::opts::SolverOpts;
use crate::problem::InterpolationProblem;
use crate::rational_core::{KernelFamily, Poly};
use crate::scalar::{cabs, cis, cpowu, czero, falling, from_usize, lit, Cx, Real};
use crate::spaces::{x_norm_poly, Exponent, SpaceSpec};

/// Largest constraint residual accepted for the returned polynomial.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PrimalCertificate<T: Real> {
    pub poly_star: Poly<T>,
    /// Exact norm of `poly_star` (certified upper end for `H^infinity`).
    pub value_upper: T,
    pub degree_used: usize,
}

pub type PrimalResult<T> = std::result::Result<PrimalCertificate<T>, SolveError<PrimalCertificate<T>>>;

/// Minimal-degree polynomial with the prescribed derivatives.
pub fn hermite_interpolant<T: Real>(family: &KernelFamily<T>, targets: &[Cx<T>]) -> Result<Poly<T>> {
    let pairs = family.index_pairs();
    let n = pairs.len();
    if targets.len() != n {
        return Err(Error::InvalidInput(format!("{} targets for {n} constraints", targets.len())));
    }
    let v = DMatrix::from_fn(n, n, |r, k| {
        let (l, j) = pairs[r];
        if k < j {
            czero()
        } else {
            cpowu(l, k - j) * falling::<T>(k, j)
        }
    });
    let lu = v.lu();
    let mut coeffs = lu
        .solve(&DVector::from_column_slice(targets))
        .ok_or_else(|| Error::DegenerateNodes("confluent Vandermonde system is singular".into()))?;
    // one step of iterative refinement
    let p = Poly::new(coeffs.iter().copied().collect());
    let r = DVector::from_iterator(
        n,
        pairs.iter().zip(targets).map(|(&(l, j), &w)| w - p.eval_derivative(j, l)),
    );
    if let Some(d) = lu.solve(&r) {
        coeffs += d;
    }
    Ok(Poly::new(coeffs.iter().copied().collect()))
}

/// `rows = c + A u`, measured in a (weighted) `l^q` or sup norm.
struct Affine<T: Real> {
    c: DVector<Cx<T>>,
    a: DMatrix<Cx<T>>,
}

impl<T: Real> Affine<T> {
    fn rows(&self, u: &DVector<Cx<T>>) -> DVector<Cx<T>> {
        &self.c + &self.a * u
    }

    /// Minimizes `sum_k r_k |rows_k|^2`.
    fn weighted_lsq(&self, r: &[T]) -> Option<DVector<Cx<T>>> {
        let s: Vec<T> = r.iter().map(|v| v.sqrt()).collect();
        let mut a = self.a.clone();
        let mut b = -self.c.clone();
        for (k, &sk) in s.iter().enumerate() {
            let f = Cx::new(sk, T::zero());
            a.row_mut(k).scale_mut(sk);
            b[k] *= f;
        }
        let qr = a.qr();
        let rhs = qr.q().adjoint() * b;
        qr.r().solve_upper_triangular(&rhs)
    }
}

fn lp_value<T: Real>(rows: &DVector<Cx<T>>, q: T) -> T {
    rows.iter().fold(T::zero(), |s, z| s + cabs(*z).powf(q))
}

fn sup_value<T: Real>(rows: &DVector<Cx<T>>) -> T {
    rows.iter().fold(T::zero(), |m, z| m.max(cabs(*z)))
}

struct Minimized<T: Real> {
    u: DVector<Cx<T>>,
    converged: bool,
}

/// Iteratively reweighted least squares for `1 <= q < 2` with a smoothing
/// parameter that is lowered each time the iteration settles.
fn irls<T: Real>(p: &Affine<T>, q: T, tol: T, max_iter: usize) -> Minimized<T> {
    let m = p.a.ncols();
    let mut u = p.weighted_lsq(&vec![T::one(); p.c.len()]).unwrap_or_else(|| DVector::from_element(m, czero()));
    let mut best = (lp_value(&p.rows(&u), q), u.clone());
    let scale = sup_value(&p.rows(&u)).max(lit(1e-300));
    let mut eps = lit::<T>(0.1) * scale;
    let eps_floor = lit::<T>(1e-15) * scale;
    let mut prev = best.0;
    let mut converged = false;
    let e = (q - lit(2.0)) * lit(0.5);
    for _ in 0..max_iter {
        let rows = p.rows(&u);
        let r: Vec<T> = rows.iter().map(|z| (z.norm_sqr() + eps * eps).powf(e)).collect();
        let Some(next) = p.weighted_lsq(&r) else { break };
        u = next;
        let v = lp_value(&p.rows(&u), q);
        if v < best.0 {
            best = (v, u.clone());
        }
        if (prev - v).abs() <= tol * v.max(lit(1e-300)) {
            if eps <= eps_floor {
                converged = true;
                break;
            }
            eps = (eps * lit(0.1)).max(eps_floor);
        }
        prev = v;
    }
    Minimized { u: best.1, converged }
}

/// Damped Newton on `sum |rows_k|^q` in real coordinates, for `q > 2`.
fn newton<T: Real>(p: &Affine<T>, q: T, tol: T, max_iter: usize) -> Minimized<T> {
    let m = p.a.ncols();
    let mut u = p.weighted_lsq(&vec![T::one(); p.c.len()]).unwrap_or_else(|| DVector::from_element(m, czero()));
    let mut f = lp_value(&p.rows(&u), q);
    let two = lit::<T>(2.0);
    let mut converged = false;
    for _ in 0..max_iter {
        let rows = p.rows(&u);
        let mut g = DVector::<T>::zeros(2 * m);
        let mut h = DMatrix::<T>::zeros(2 * m, 2 * m);
        for (k, z) in rows.iter().enumerate() {
            let r2 = z.norm_sqr();
            if r2 == T::zero() {
                continue;
            }
            let s = q * r2.powf((q - two) / two);
            let t = q * (q - two) * r2.powf((q - lit(4.0)) / two);
            // d(re z, im z)/d(re u, im u)
            let mut jr = DVector::<T>::zeros(2 * m);
            let mut ji = DVector::<T>::zeros(2 * m);
            for c in 0..m {
                let a = p.a[(k, c)];
                jr[c] = a.re;
                jr[m + c] = -a.im;
                ji[c] = a.im;
                ji[m + c] = a.re;
            }
            g.axpy(s * z.re, &jr, T::one());
            g.axpy(s * z.im, &ji, T::one());
            let v = &jr * z.re + &ji * z.im;
            h.ger(s, &jr, &jr, T::one());
            h.ger(s, &ji, &ji, T::one());
            h.ger(t, &v, &v, T::one());
        }
        let ridge = lit::<T>(1e-14) * (0..2 * m).fold(T::zero(), |a, i| a.max(h[(i, i)])).max(lit(1e-300));
        for i in 0..2 * m {
            h[(i, i)] += ridge;
        }
        let Some(ch) = Cholesky::new(h) else { break };
        let d = -ch.solve(&g);
        let decrement = -g.dot(&d);
        if decrement <= tol * f {
            converged = true;
            break;
        }
        let step = DVector::from_fn(m, |c, _| Cx::new(d[c], d[m + c]));
        let mut t = T::one();
        let mut moved = false;
        for _ in 0..60 {
            let cand = &u + &step * Cx::new(t, T::zero());
            let fc = lp_value(&p.rows(&cand), q);
            if fc <= f - lit::<T>(1e-4) * t * decrement {
                u = cand;
                f = fc;
                moved = true;
                break;
            }
            t *= lit(0.5);
        }
        if !moved {
            converged = true;
            break;
        }
    }
    Minimized { u, converged }
}

/// Lawson's reweighting for the sup of `|rows_k|`.
fn lawson<T: Real>(p: &Affine<T>, tol: T, max_iter: usize) -> Minimized<T> {
    let n = p.c.len();
    let m = p.a.ncols();
    let mut wts = vec![T::one() / from_usize(n); n];
    let mut u = p.weighted_lsq(&wts).unwrap_or_else(|| DVector::from_element(m, czero()));
    let mut best = (sup_value(&p.rows(&u)), u.clone());
    let mut converged = false;
    let mut stall = 0;
    for _ in 0..max_iter {
        let rows = p.rows(&u);
        let mut total = T::zero();
        for (w, z) in wts.iter_mut().zip(rows.iter()) {
            *w *= cabs(*z);
            total += *w;
        }
        if !(total > T::zero()) {
            converged = true;
            break;
        }
        // keep every weight strictly positive so no row is dropped for good
        let floor = lit::<T>(1e-300);
        for w in wts.iter_mut() {
            *w = (*w / total).max(floor);
        }
        let Some(next) = p.weighted_lsq(&wts) else { break };
        u = next;
        let v = sup_value(&p.rows(&u));
        if v < best.0 * (T::one() - tol) {
            best = (v, u.clone());
            stall = 0;
        } else {
            stall += 1;
            if stall >= 50 {
                converged = true;
                break;
            }
        }
    }
    Minimized { u: best.1, converged }
}

/// Polynomial product written as a matrix acting on the coefficients of `u`.
fn convolution<T: Real>(m: &Poly<T>, cols: usize, rows: usize) -> DMatrix<Cx<T>> {
    let mc = m.coeffs();
    DMatrix::from_fn(rows, cols, |r, c| {
        if r >= c && r - c < mc.len() {
            mc[r - c]
        } else {
            czero()
        }
    })
}

/// Minimizes the `X`-norm over interpolants of degree at most `degree`.
///
/// `value_upper` is the exact norm of the returned polynomial. On
/// non-convergence the best feasible point is returned inside
/// [`SolveError::NoConvergence`]; it is still a valid upper bound.
pub fn primal_min<T: Real>(
    problem: &InterpolationProblem<T>,
    degree: usize,
    opts: &SolverOpts,
) -> PrimalResult<T> {
    let n = problem.targets.len();
    if degree + 1 < n {
        return Err(Error::DegreeTooSmall { degree, constraints: n }.into());
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()).into());
    }
    let h = hermite_interpolant(&problem.family, &problem.targets)?;
    let m = problem.family.minimal_polynomial();
    let free = degree + 1 - n;
    let len = degree + 1;
    let mut hc = DVector::from_element(len, czero());
    for (k, c) in h.coeffs().iter().enumerate().take(len) {
        hc[k] = *c;
    }
    let mconv = convolution(&m, free, len);
    let tol = lit::<T>(opts.tol);

    let (u, converged) = if free == 0 {
        (DVector::from_element(0, czero()), true)
    } else {
        match problem.space {
            SpaceSpec::BeurlingSobolev { q, beta } => {
                let w: Vec<T> = (0..len).map(|k| weight(k, beta)).collect();
                let mut c = hc.clone();
                let mut a = mconv.clone();
                for k in 0..len {
                    c[k] *= Cx::new(w[k], T::zero());
                    a.row_mut(k).scale_mut(w[k]);
                }
                let aff = Affine { c, a };
                let r = match q {
                    Exponent::Infinite => lawson(&aff, tol, opts.max_iter),
                    Exponent::Finite(q) if q == lit(2.0) => Minimized {
                        u: aff.weighted_lsq(&vec![T::one(); len]).unwrap_or_else(|| DVector::from_element(free, czero())),
                        converged: true,
                    },
                    Exponent::Finite(q) if q < lit(2.0) => irls(&aff, q, tol, opts.max_iter),
                    Exponent::Finite(q) => newton(&aff, q, tol, opts.max_iter),
                };
                (r.u, r.converged)
            }
            SpaceSpec::HInfinity => {
                let samples = 16 * len;
                let eval = DMatrix::from_fn(samples, len, |s, k| {
                    let th = lit::<T>(std::f64::consts::TAU) * from_usize::<T>(s) / from_usize::<T>(samples);
                    cis(th * from_usize::<T>(k))
                });
                let aff = Affine { c: &eval * &hc, a: &eval * &mconv };
                let r = lawson(&aff, tol, opts.max_iter);
                (r.u, r.converged)
            }
        }
    };
    let coeffs = &hc + &mconv * &u;
    let mut f = Poly::new(coeffs.iter().copied().collect());
    // project back onto the constraint set if rounding drifted
    if problem.residual(&f) > lit(RESIDUAL_TOL * 1e-2) {
        let r: Vec<Cx<T>> = problem
            .family
            .index_pairs()
            .iter()
            .zip(&problem.targets)
            .map(|(&(l, j), &w)| w - f.eval_derivative(j, l))
            .collect();
        let corr = hermite_interpolant(&problem.family, &r)?;
        f = &f + &corr;
    }
    let res = problem.residual(&f);
    if !(res <= lit(RESIDUAL_TOL)) {
        return Err(Error::DegenerateNodes(format!(
            "interpolant residual {:e} exceeds {RESIDUAL_TOL:e}",
            crate::scalar::to_f64(res)
        ))
        .into());
    }
    let value = x_norm_poly(&problem.space, &f);
    let cert = PrimalCertificate { poly_star: f, value_upper: value, degree_used: degree };
    if converged {
        Ok(cert)
    } else {
        Err(SolveError::NoConvergence(Box::new(cert)))
    }
}

fn weight<T: Real>(k: usize, beta: T) -> T {
    if k == 0 {
        T::one()
    } else {
        from_usize::<T>(k).powf(beta)
    }
}
