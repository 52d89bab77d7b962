//! The compressed shift on the model space and norms in Malmquist-Walsh
//! coordinates.
//!
//! In the orthonormal basis `e_0, .., e_{n-1}` the compression of
//! multiplication by `z` is lower triangular with the nodes on the diagonal
//! and, below it,
//! `sqrt(1 - |l_i|^2) sqrt(1 - |l_j|^2) prod_{j < mu < i} (-conj(l_mu))`.
//! An operator `g(S)^*` acts on coordinates by the conjugate transpose of
//! `g(M)`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{eigenvalues, is_lower_triangular, poly_of_matrix, spectral_norm, CMatrix};
use crate::optimize::nelder_mead_restarted;
use crate::opts::SolverOpts;
use crate::primal_solver::hermite_interpolant;
use crate::rational_core::{malmquist_walsh, taylor_stream, CoeffStream, KernelFamily, Poly, RationalFn};
use crate::scalar::{cabs, cone, czero, lit, to_f64, Cx, Real};
use crate::spaces::tail::{enclose, tail_norm_bound, weighted_norm, TailTerm};
use crate::spaces::{Exponent, SpaceSpec, K_MAX};

/// Tolerance of the annihilation check `m(M) = 0`.
pub const ANNIHILATION_TOL: f64 = 1e-10;

/// Least admissible distance between a pole and the spectrum.
pub const POLE_SEPARATION: f64 = 1e-8;

/// Compressed shift together with the family it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMatrix<T: Real> {
    pub entries: CMatrix<T>,
    pub family: KernelFamily<T>,
}

/// Structural checks of a [`ModelMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelChecks<T> {
    pub lower_triangular: bool,
    pub diagonal_matches_nodes: bool,
    /// Largest entry of `m(M)`.
    pub annihilation_residual: T,
}

impl<T: Real> ModelMatrix<T> {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn checks(&self) -> ModelChecks<T> {
        let ex = self.family.expanded();
        let m = poly_of_matrix(&self.family.minimal_polynomial(), &self.entries);
        ModelChecks {
            lower_triangular: is_lower_triangular(&self.entries),
            diagonal_matches_nodes: ex.iter().enumerate().all(|(i, l)| self.entries[(i, i)] == *l),
            annihilation_residual: m.iter().fold(T::zero(), |a, z| a.max(cabs(*z))),
        }
    }
}

pub fn build_model_matrix<T: Real>(family: &KernelFamily<T>) -> ModelMatrix<T> {
    let l = family.expanded();
    let n = l.len();
    let s: Vec<T> = l.iter().map(|z| (T::one() - z.norm_sqr()).sqrt()).collect();
    let mut entries = DMatrix::from_element(n, n, czero());
    for j in 0..n {
        entries[(j, j)] = l[j];
        let mut prod = cone::<T>();
        for i in j + 1..n {
            // adding +0 turns a signed zero from the product into +0
            entries[(i, j)] = prod * (s[i] * s[j]) + czero();
            prod *= -l[i].conj();
        }
    }
    let out = ModelMatrix { entries, family: family.clone() };
    debug_assert!({
        let c = out.checks();
        c.lower_triangular
            && c.diagonal_matches_nodes
            && c.annihilation_residual <= lit(ANNIHILATION_TOL)
    });
    out
}

/// Matrix of `<z e_j, e_i>` computed from Taylor coefficients of the basis
/// through index `k_last` (the `H^2` inner product of truncated series).
pub fn gram_oracle<T: Real>(family: &KernelFamily<T>, k_last: usize) -> Result<CMatrix<T>> {
    let basis = malmquist_walsh(family)?;
    let coeffs = basis
        .iter()
        .map(|e| taylor_stream(e, k_last).map(|s| s.window()[..=k_last].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let n = coeffs.len();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        (1..=k_last).fold(czero(), |acc, t| acc + coeffs[j][t - 1] * coeffs[i][t].conj())
    }))
}

/// `Psi(M)` together with the disagreement between `q(M)^{-1} p(M)` and
/// `p(M) q(M)^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFunction<T: Real> {
    pub value: CMatrix<T>,
    pub discrepancy: T,
}

/// Evaluates `Psi = p / q` at a square matrix by linear solves against `q(M)`.
///
/// Triangular `q(M)` (as for a model matrix) is solved by substitution,
/// anything else by LU.
pub fn rational_of_matrix<T: Real>(psi: &RationalFn<T>, m: &CMatrix<T>) -> Result<MatrixFunction<T>> {
    let spec = eigenvalues(m);
    for pole in psi.poles() {
        let d = spec.iter().fold(T::max_value().unwrap(), |a, l| a.min(cabs(pole - *l)));
        if d < lit(POLE_SEPARATION) {
            return Err(Error::PoleOnSpectrum { distance: to_f64(d) });
        }
    }
    let p = poly_of_matrix(psi.num(), m);
    if psi.is_polynomial() {
        let c = psi.den().coeff(0);
        return Ok(MatrixFunction { value: p / c, discrepancy: T::zero() });
    }
    let q = poly_of_matrix(psi.den(), m);
    let singular = || Error::PoleOnSpectrum { distance: 0.0 };
    let (left, right) = if is_lower_triangular(&q) {
        let l = q.solve_lower_triangular(&p).ok_or_else(singular)?;
        // X q = p  <=>  q^T X^T = p^T, with q^T upper triangular
        let r = q.transpose().solve_upper_triangular(&p.transpose()).ok_or_else(singular)?;
        (l, r.transpose())
    } else {
        let lu = q.clone().lu();
        let l = lu.solve(&p).ok_or_else(singular)?;
        let r = q.transpose().lu().solve(&p.transpose()).ok_or_else(singular)?;
        (l, r.transpose())
    };
    let discrepancy = (&left - &right).iter().fold(T::zero(), |a, z| a.max(cabs(*z)));
    Ok(MatrixFunction { value: left, discrepancy })
}

/// Polynomial `g = Psi * prod_i (m(xi_i) - m) / m(xi_i)` over the poles
/// `xi_i` of `Psi`; it agrees with `Psi` to the multiplicity of every root
/// of `m`.
pub fn lift_to_polynomial<T: Real>(psi: &RationalFn<T>, m: &Poly<T>) -> Result<Poly<T>> {
    if psi.is_polynomial() {
        return Ok(psi.num().scale(cone::<T>() / psi.den().coeff(0)));
    }
    let mut g = psi.num().scale(cone::<T>() / psi.den().leading());
    let scale = m.l1_coeffs().max(T::one());
    for xi in psi.poles() {
        let mx = m.eval(xi);
        if !(cabs(mx) > lit::<T>(1e-10)) {
            return Err(Error::PoleOnSpectrum { distance: to_f64(cabs(mx)) });
        }
        // (m(xi) - m(z)) vanishes at xi; divide out (z - xi) exactly
        let top = &Poly::constant(mx) - m;
        let (quot, rem) = top.div_rem(&Poly::linear_factor(xi));
        let r = rem.coeffs().iter().fold(T::zero(), |a, z| a.max(cabs(*z)));
        if r > lit::<T>(1e-10) * scale {
            return Err(Error::InvalidInput(format!("lifting remainder {:e}", to_f64(r))));
        }
        g = &g * &quot.scale(cone::<T>() / mx);
    }
    Ok(g)
}

/// The norm `|x|_* = || sum x_j e_j ||_Y` on model-space coordinates.
#[derive(Debug, Clone)]
pub struct StarNorm<T: Real> {
    pub family: KernelFamily<T>,
    pub space: SpaceSpec<T>,
    streams: Vec<CoeffStream<T>>,
    p: Exponent<T>,
    /// Row `k`: Y-weighted `k`-th coefficient of each basis element.
    weighted: DMatrix<Cx<T>>,
    tails: Vec<T>,
}

impl<T: Real> StarNorm<T> {
    /// Builds coefficient tables long enough that every basis element's tail
    /// norm is below `unit_tol`. `space` is `X`; the norm is that of its
    /// predual.
    pub fn new(space: &SpaceSpec<T>, family: &KernelFamily<T>, unit_tol: T) -> Result<Self> {
        let p = space
            .predual_exponent()
            .ok_or_else(|| Error::UnsupportedSpace(space.to_string()))?;
        let basis = malmquist_walsh(family)?;
        let y_beta = -space.beta();
        let mut k = 127;
        loop {
            let streams = basis
                .iter()
                .map(|e| taylor_stream(e, k))
                .collect::<Result<Vec<_>>>()?;
            let k_last = streams.iter().map(|s| s.last_index()).min().unwrap_or(0);
            let tails: Vec<T> = streams
                .iter()
                .map(|s| {
                    if s.decay_amp() == T::zero() {
                        return T::zero();
                    }
                    let term = TailTerm {
                        amp: s.decay_amp(),
                        shift: 1,
                        power: crate::scalar::from_usize(s.poly_order()),
                        base: s.decay_base(),
                    };
                    tail_norm_bound(&[term], y_beta, p, k_last).unwrap_or(T::max_value().unwrap())
                })
                .collect();
            if tails.iter().all(|&t| t <= unit_tol) {
                let n = streams.len();
                let weighted = DMatrix::from_fn(k_last + 1, n, |r, c| {
                    streams[c].coeff(r).unwrap_or_else(czero) * space.y_weight(r)
                });
                return Ok(StarNorm { family: family.clone(), space: space.clone(), streams, p, weighted, tails });
            }
            k = 2 * k + 1;
            if k > K_MAX {
                return Err(Error::NoConvergence(format!(
                    "basis tails above {} after {K_MAX} terms",
                    to_f64(unit_tol)
                )));
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.tails.len()
    }

    pub fn streams(&self) -> &[CoeffStream<T>] {
        &self.streams
    }

    pub fn k_last(&self) -> usize {
        self.weighted.nrows() - 1
    }

    fn head(&self, x: &[Cx<T>]) -> T {
        let c = &self.weighted * DVector::from_column_slice(x);
        weighted_norm(c.as_slice(), T::zero(), self.p)
    }

    fn enclosure(&self, x: &[Cx<T>]) -> Interval<T> {
        let tail = x.iter().zip(&self.tails).fold(T::zero(), |s, (a, t)| {
            if *t == T::zero() {
                s
            } else {
                s + cabs(*a) * *t
            }
        });
        enclose(self.head(x), tail, self.p)
    }
}

/// Enclosure of `|x|_*`; exact for `H^2`, where the basis is orthonormal.
pub fn star_norm_vector<T: Real>(sn: &StarNorm<T>, x: &[Cx<T>]) -> Result<Interval<T>> {
    if x.len() != sn.dim() {
        return Err(Error::InvalidInput(format!("vector of length {} for dimension {}", x.len(), sn.dim())));
    }
    if sn.space.is_hardy2() {
        return Ok(Interval::point(DVector::from_column_slice(x).norm()));
    }
    Ok(sn.enclosure(x))
}

/// Induced norm of `A` on `(C^n, |.|_*)`.
///
/// For `H^2` this is the spectral norm and both ends agree. Otherwise the lower
/// end is the best certified ratio `|Ax|_* / |x|_*` found by a seeded
/// multi-start search and the upper end is that value times
/// `1 + gap_slack`, which is a heuristic, not a bound.
pub fn star_operator_norm<T: Real>(sn: &StarNorm<T>, a: &CMatrix<T>, opts: &SolverOpts) -> Result<Interval<T>> {
    let n = sn.dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::InvalidInput(format!("{}x{} matrix for dimension {n}", a.nrows(), a.ncols())));
    }
    if sn.space.is_hardy2() {
        return Ok(Interval::point(spectral_norm(a)));
    }
    let ratio_head = |x: &[Cx<T>]| -> T {
        let ax = a * DVector::from_column_slice(x);
        let d = sn.head(x);
        if d > T::zero() {
            sn.head(ax.as_slice()) / d
        } else {
            T::zero()
        }
    };
    let certified = |x: &[Cx<T>]| -> T {
        let ax = a * DVector::from_column_slice(x);
        let d = sn.enclosure(x).upper;
        if d > T::zero() {
            sn.enclosure(ax.as_slice()).lower / d
        } else {
            T::zero()
        }
    };

    let mut starts: Vec<Vec<Cx<T>>> = Vec::new();
    let svd = a.clone().svd(false, true);
    if let Some(vt) = svd.v_t.as_ref() {
        let (imax, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, T::zero()), |b, (i, &s)| if s > b.1 { (i, s) } else { b });
        starts.push(vt.row(imax).iter().map(|z| z.conj()).collect());
    }
    for i in 0..n {
        let mut e = vec![czero(); n];
        e[i] = cone();
        starts.push(e);
    }
    for r in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.restart_seed(r));
        starts.push(
            (0..n)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Cx::new(lit(re), lit(im))
                })
                .collect(),
        );
    }
    let tol = lit::<T>(opts.tol);
    let results: Vec<(T, Vec<Cx<T>>)> = starts
        .par_iter()
        .map(|x0| {
            // fix the largest entry to 1 to remove scaling
            let piv = (0..n).fold(0, |b, i| if cabs(x0[i]) > cabs(x0[b]) { i } else { b });
            let x0: Vec<Cx<T>> = x0.iter().map(|z| *z / x0[piv]).collect();
            let embed = |u: &[T]| -> Vec<Cx<T>> {
                let mut x = Vec::with_capacity(n);
                let mut t = 0;
                for i in 0..n {
                    if i == piv {
                        x.push(cone());
                    } else {
                        x.push(Cx::new(u[t], u[t + 1]));
                        t += 2;
                    }
                }
                x
            };
            let u0: Vec<T> = (0..n).filter(|&i| i != piv).flat_map(|i| [x0[i].re, x0[i].im]).collect();
            let x = if u0.is_empty() {
                x0
            } else {
                let r = nelder_mead_restarted(&|u: &[T]| -ratio_head(&embed(u)), &u0, lit(0.25), tol, opts.max_iter);
                embed(&r.x)
            };
            (certified(&x), x)
        })
        .collect();
    let lower = results
        .iter()
        .fold(T::zero(), |m, r| m.max(r.0));
    Ok(Interval::new(lower, lower * (T::one() + lit(opts.gap_slack))))
}

/// Least sup norm of an interpolant: the spectral norm of `g(M)` for any
/// polynomial `g` with the prescribed jets (the Hermite one is used).
pub fn hinf_interp_norm<T: Real>(family: &KernelFamily<T>, targets: &[Cx<T>]) -> Result<T> {
    let g = hermite_interpolant(family, targets)?;
    let m = build_model_matrix(family);
    Ok(spectral_norm(&poly_of_matrix(&g, &m.entries)))
}
