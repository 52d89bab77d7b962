//! Lower bounds on the interpolation norm from the dual side.
//!
//! For any coefficient vector `alpha`, `|<alpha, conj(w)>| / N(alpha)` is a
//! lower bound on the minimal norm, where `N` is the predual norm of
//! `sum alpha_{i,j} k_{lambda_i, j}`. The solver maximizes this ratio.
//!
//! The ratio is invariant under complex scaling of `alpha`, so the search runs
//! on the affine slice `<alpha, conj(w)> = 1`, where it reduces to minimizing
//! the convex function `N`. Points on the slice are written
//! `alpha = alpha_0 + V u` with `V` an orthonormal basis of the complement of
//! `w`, leaving `2(n - 1)` real unknowns.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result, SolveError};
use crate::interval::Interval;
use crate::optimize::{nelder_mead_restarted, LocalMin};
use crate::opts::SolverOpts;
use crate::problem::InterpolationProblem;
use crate::scalar::{cabs, cone, czero, lit, Cx, Real};
use crate::spaces::{gram_h2, y_norm_combo, KernelCombo, PredualTable};

#[derive(Debug, Clone, PartialEq)]
pub struct DualCertificate<T: Real> {
    pub alpha_star: Vec<Cx<T>>,
    /// Certified: `|<alpha*, conj(w)>|` over the upper end of the norm enclosure.
    pub value_lower: T,
    /// Best ratio seen using the truncated norm; not certified.
    pub value_upper: T,
    /// Enclosure of the predual norm of the maximizing combination.
    pub norm_enclosure: Interval<T>,
    /// Truncation index of the coefficient table used.
    pub truncation: usize,
}

impl<T: Real> DualCertificate<T> {
    /// Recomputes the certified ratio from `alpha_star` alone.
    pub fn recompute_lower(&self, problem: &InterpolationProblem<T>) -> Result<T> {
        let table = PredualTable::build(&problem.space, &problem.family, self.truncation)?;
        Ok(ratio_lower(problem, &table, &self.alpha_star))
    }
}

pub type DualResult<T> = std::result::Result<DualCertificate<T>, SolveError<DualCertificate<T>>>;

fn ratio_lower<T: Real>(p: &InterpolationProblem<T>, table: &PredualTable<T>, a: &[Cx<T>]) -> T {
    let num = cabs(p.pairing(a));
    let den = table.enclosure(a).upper;
    if den > T::zero() {
        num / den
    } else {
        T::zero()
    }
}

/// Affine parameterization of `{alpha : <alpha, conj(w)> = 1}`.
struct Slice<T: Real> {
    base: DVector<Cx<T>>,
    basis: DMatrix<Cx<T>>,
}

impl<T: Real> Slice<T> {
    fn new(w: &[Cx<T>]) -> Self {
        let n = w.len();
        let wv = DVector::from_column_slice(w);
        let nn = wv.norm_squared();
        let base = &wv * Cx::new(T::one() / nn, T::zero());
        // Gram-Schmidt on the unit vectors, largest residual first
        let mut frame: Vec<DVector<Cx<T>>> = vec![&wv * Cx::new(T::one() / nn.sqrt(), T::zero())];
        let mut cols = Vec::with_capacity(n.saturating_sub(1));
        let mut used = vec![false; n];
        for _ in 1..n {
            let mut best: Option<(usize, DVector<Cx<T>>, T)> = None;
            for k in (0..n).filter(|&k| !used[k]) {
                let mut v = DVector::from_element(n, czero::<T>());
                v[k] = cone();
                for f in &frame {
                    let c = f.dotc(&v);
                    v -= f * c;
                }
                let r = v.norm();
                if best.as_ref().map_or(true, |b| r > b.2) {
                    best = Some((k, v, r));
                }
            }
            let (k, v, r) = best.expect("remaining unit vector");
            used[k] = true;
            let e = v * Cx::new(T::one() / r, T::zero());
            frame.push(e.clone());
            cols.push(e);
        }
        let basis = if cols.is_empty() {
            DMatrix::from_element(n, 0, czero())
        } else {
            DMatrix::from_columns(&cols)
        };
        Slice { base, basis }
    }

    fn dim(&self) -> usize {
        2 * self.basis.ncols()
    }

    fn point(&self, u: &[T]) -> Vec<Cx<T>> {
        let m = self.basis.ncols();
        let uc = DVector::from_fn(m, |i, _| Cx::new(u[2 * i], u[2 * i + 1]));
        (&self.base + &self.basis * uc).iter().copied().collect()
    }

    /// Coordinates of `alpha / <alpha, conj(w)>`, if that pairing is nonzero.
    fn coords(&self, alpha: &[Cx<T>], w: &[Cx<T>]) -> Option<Vec<T>> {
        let s = alpha.iter().zip(w).fold(czero::<T>(), |acc, (&a, &x)| acc + a * x.conj());
        if !(cabs(s) > lit::<T>(1e-14) * DVector::from_column_slice(alpha).norm()) {
            return None;
        }
        let a = DVector::from_column_slice(alpha) * (cone::<T>() / s);
        let u = self.basis.adjoint() * (a - &self.base);
        Some(u.iter().flat_map(|z| [z.re, z.im]).collect())
    }
}

/// Coefficients of the minimal `H^2` dual combination, `conj(G^{-1} conj(w))`.
fn hardy_warm_start<T: Real>(p: &InterpolationProblem<T>) -> Option<Vec<Cx<T>>> {
    let g = gram_h2(&p.family).matrix;
    let wt = DVector::from_iterator(p.targets.len(), p.targets.iter().map(|z| z.conj()));
    let x = g.lu().solve(&wt)?;
    Some(x.iter().map(|z| z.conj()).collect())
}

fn random_alpha<T: Real>(n: usize, seed: u64) -> Vec<Cx<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Cx::new(lit(re), lit(im))
        })
        .collect()
}

/// The search as run by [`dual_norm`], shared with [`feasibility_check`].
struct DualSearch<T: Real> {
    table: PredualTable<T>,
    slice: Slice<T>,
}

impl<T: Real> DualSearch<T> {
    fn objective(&self, u: &[T]) -> T {
        self.table.head_norm(&self.slice.point(u))
    }

    fn starts(&self, p: &InterpolationProblem<T>, opts: &SolverOpts) -> Vec<Vec<T>> {
        let n = p.targets.len();
        let mut out = Vec::new();
        if let Some(u) = hardy_warm_start(p).and_then(|a| self.slice.coords(&a, &p.targets)) {
            out.push(u);
        }
        for i in 0..n {
            let mut e = vec![czero(); n];
            e[i] = cone();
            if let Some(u) = self.slice.coords(&e, &p.targets) {
                out.push(u);
            }
        }
        let mut k = 0;
        while out.len() < n + 1 + opts.restarts {
            let a = random_alpha(n, opts.restart_seed(k));
            k += 1;
            if let Some(u) = self.slice.coords(&a, &p.targets) {
                out.push(u);
            }
        }
        out
    }

    /// Runs every start concurrently and keeps the smallest norm; ties go
    /// to the earliest start so the result does not depend on scheduling.
    fn run(&self, p: &InterpolationProblem<T>, opts: &SolverOpts) -> (LocalMin<T>, bool) {
        let tol = lit::<T>(opts.tol);
        let starts = self.starts(p, opts);
        let results: Vec<LocalMin<T>> = starts
            .par_iter()
            .map(|u0| {
                let scale = u0.iter().fold(T::zero(), |m, v| m.max(v.abs()));
                let base = self.slice.base.norm();
                let step = lit::<T>(0.2) * (scale + base);
                nelder_mead_restarted(&|u: &[T]| self.objective(u), u0, step, tol, opts.max_iter)
            })
            .collect();
        let any_converged = results.iter().any(|r| r.converged);
        let best = results
            .into_iter()
            .reduce(|a, b| if b.value < a.value { b } else { a })
            .expect("at least one start");
        // polish the incumbent with a small fresh simplex
        let base = self.slice.base.norm();
        let polished = nelder_mead_restarted(
            &|u: &[T]| self.objective(u),
            &best.x,
            lit::<T>(1e-3) * base,
            tol,
            opts.max_iter,
        );
        let out = if polished.value < best.value { polished } else { best };
        (out, any_converged)
    }
}

fn check_opts(opts: &SolverOpts) -> Result<()> {
    if opts.restarts == 0 || !(opts.tol > 0.0) || !(opts.truncation_tol > 0.0) {
        return Err(Error::InvalidInput(
            "restarts must be positive and tolerances strictly positive".into(),
        ));
    }
    Ok(())
}

/// Maximizes `|<alpha, conj(w)>| / N(alpha)` over kernel coefficient vectors.
///
/// `value_lower` is a certified lower bound on the interpolation norm. If no
/// start meets the stationarity criterion the best certificate is returned
/// inside [`SolveError::NoConvergence`]; its `value_lower` is still valid.
pub fn dual_norm<T: Real>(problem: &InterpolationProblem<T>, opts: &SolverOpts) -> DualResult<T> {
    check_opts(opts)?;
    if problem.space.is_hinfinity() {
        return Err(Error::UnsupportedSpace(problem.space.to_string()).into());
    }
    let table = PredualTable::for_tolerance(
        &problem.space,
        &problem.family,
        lit(opts.truncation_tol),
    )?;
    let n = problem.targets.len();
    if problem.is_zero() {
        let mut alpha = vec![czero(); n];
        alpha[0] = cone();
        let enc = table.enclosure(&alpha);
        return Ok(DualCertificate {
            alpha_star: alpha,
            value_lower: T::zero(),
            value_upper: T::zero(),
            norm_enclosure: enc,
            truncation: table.k_last(),
        });
    }
    let search = DualSearch { slice: Slice::new(&problem.targets), table };
    let (best, converged) = if search.slice.dim() == 0 {
        let v = search.objective(&[]);
        (LocalMin { x: Vec::new(), value: v, iterations: 0, converged: true }, true)
    } else {
        search.run(problem, opts)
    };
    let alpha = search.slice.point(&best.x);
    let enc = search.table.enclosure(&alpha);
    let lower = ratio_lower(problem, &search.table, &alpha);
    let upper = cabs(problem.pairing(&alpha)) / best.value;
    let cert = DualCertificate {
        alpha_star: alpha,
        value_lower: lower,
        value_upper: upper.max(lower),
        norm_enclosure: enc,
        truncation: search.table.k_last(),
    };
    if converged {
        Ok(cert)
    } else {
        Err(SolveError::NoConvergence(Box::new(cert)))
    }
}

/// Outcome of [`feasibility_check`].
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<T: Real> {
    /// No violating `alpha` found. This does not prove feasibility.
    NoViolationFound,
    /// `|<alpha, conj(w)>| - C * upper(N(alpha)) = margin > 0`, which proves
    /// that the interpolation norm exceeds `C`.
    ViolatedBy { alpha: Vec<Cx<T>>, margin: T },
}

/// Searches for a witness that no interpolant of norm at most `c` exists.
pub fn feasibility_check<T: Real>(
    problem: &InterpolationProblem<T>,
    c: T,
    trials: usize,
    seed: u64,
) -> Result<Verdict<T>> {
    if !(c >= T::zero()) {
        return Err(Error::InvalidInput("C must be nonnegative".into()));
    }
    if problem.space.is_hinfinity() {
        return Err(Error::UnsupportedSpace(problem.space.to_string()));
    }
    if problem.is_zero() {
        return Ok(Verdict::NoViolationFound);
    }
    let family = problem.family.clone();
    let margin_of = |alpha: &[Cx<T>]| -> Result<T> {
        let combo = KernelCombo::new(family.clone(), alpha.to_vec())?;
        let scale = alpha.iter().fold(T::zero(), |s, a| s + cabs(*a));
        let enc = y_norm_combo(&problem.space, &combo, lit::<T>(1e-12) * scale)?;
        Ok(cabs(problem.pairing(alpha)) - c * enc.upper)
    };
    let n = problem.targets.len();
    for i in 0..n {
        if problem.targets[i] == czero() {
            continue;
        }
        let mut e = vec![czero(); n];
        e[i] = cone();
        let m = margin_of(&e)?;
        if m > T::zero() {
            return Ok(Verdict::ViolatedBy { alpha: e, margin: m });
        }
    }
    let mut opts = SolverOpts::with_seed(seed);
    opts.restarts = trials.max(1);
    let cert = match dual_norm(problem, &opts) {
        Ok(c) => c,
        Err(e) => match e.into_best() {
            Some(c) => c,
            None => return Ok(Verdict::NoViolationFound),
        },
    };
    let m = margin_of(&cert.alpha_star)?;
    if m > T::zero() {
        Ok(Verdict::ViolatedBy { alpha: cert.alpha_star, margin: m })
    } else {
        Ok(Verdict::NoViolationFound)
    }
}
