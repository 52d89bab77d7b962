//! Functional-calculus bounds `||Psi(T)|| <= c ||Psi(M)^*||_*` for operators
//! annihilated by a polynomial `m`, with `M` the compressed shift built from
//! the roots of `m`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{eigenvalues, induced_norm, rank, CMatrix, NormId};
use crate::model_operator::{build_model_matrix, rational_of_matrix, star_operator_norm, StarNorm};
use crate::opts::SolverOpts;
use crate::rational_core::{cluster_roots, default_cluster_tol, KernelFamily, Node, Poly, RationalFn, BOUNDARY_EPS};
use crate::scalar::{cabs, cis, cx, lit, to_f64, Cx, Real};
use crate::spaces::SpaceSpec;

/// Rank and clustering tolerance of the minimal-polynomial extraction.
pub const JORDAN_TOL: f64 = 1e-8;

/// A space `X` with `||g(T)|| <= c ||g||_X`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalculusSpec<T: Real> {
    pub space: SpaceSpec<T>,
    pub c: T,
}

impl<T: Real> CalculusSpec<T> {
    pub fn new(space: SpaceSpec<T>, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::InvalidInput("calculus constant must be positive".into()));
        }
        Ok(CalculusSpec { space, c })
    }
}

/// Whether the calculus hypothesis was checked for a supplied matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// A contraction with the Wiener calculus, or a spectral contraction
    /// with the `H^infinity` calculus (von Neumann).
    Verified,
    Unverified,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T: Real> {
    pub bound: Interval<T>,
    pub actual: Option<T>,
    /// `actual / bound.upper`.
    pub ratio: Option<T>,
    pub hypothesis: Option<Hypothesis>,
}

fn family_from_clusters<T: Real>(clusters: &[(Cx<T>, usize)]) -> Result<KernelFamily<T>> {
    for (r, _) in clusters {
        if !(cabs(*r) < T::one() - lit(BOUNDARY_EPS)) {
            return Err(Error::RootOnBoundary { modulus: to_f64(cabs(*r)) });
        }
    }
    let nodes = clusters
        .iter()
        .map(|&(l, k)| Node::new(l, k))
        .collect::<Result<Vec<_>>>()?;
    KernelFamily::new(nodes)
}

/// `c * ||Psi(M)^*||_*` for the model space of `family`. `H^infinity`
/// calculus is measured in `H^2` coordinates, where the induced norm is
/// spectral.
pub fn bound_for_family<T: Real>(
    family: &KernelFamily<T>,
    psi: &RationalFn<T>,
    calc: &CalculusSpec<T>,
    opts: &SolverOpts,
) -> Result<Interval<T>> {
    let m = build_model_matrix(family);
    let a = rational_of_matrix(psi, &m.entries)?.value.adjoint();
    let coords = if calc.space.is_hinfinity() { SpaceSpec::hardy2() } else { calc.space.clone() };
    let sn = StarNorm::new(&coords, family, lit(opts.truncation_tol))?;
    Ok(star_operator_norm(&sn, &a, opts)?.scale(calc.c))
}

/// Bound for every operator with minimal polynomial dividing `m`.
///
/// Repeated roots of `m` are grouped within the default clustering radius
/// (companion eigenvalues of a double root are only accurate to about the
/// square root of machine precision).
pub fn compute_bound<T: Real>(
    m: &Poly<T>,
    psi: &RationalFn<T>,
    calc: &CalculusSpec<T>,
    opts: &SolverOpts,
) -> Result<BoundReport<T>> {
    match m.degree() {
        Some(d) if d >= 1 => {}
        _ => return Err(Error::InvalidInput("minimal polynomial must have degree at least 1".into())),
    }
    let roots = m.roots();
    let family = family_from_clusters(&cluster_roots(&roots, default_cluster_tol()))?;
    let bound = bound_for_family(&family, psi, calc, opts)?;
    Ok(BoundReport { bound, actual: None, ratio: None, hypothesis: None })
}

/// Minimal polynomial of `a` as (eigenvalue, Jordan index) pairs.
///
/// Eigenvalues within [`JORDAN_TOL`] are merged; the index of each is the
/// first power at which the rank of `(A - mu I)^k` stops dropping.
pub fn minimal_polynomial_of<T: Real>(a: &CMatrix<T>) -> Vec<(Cx<T>, usize)> {
    let n = a.nrows();
    let eig = eigenvalues(a);
    let tol = lit::<T>(JORDAN_TOL);
    let clusters = cluster_roots(&eig, tol);
    clusters
        .into_iter()
        .map(|(mu, alg)| {
            let shifted = a - CMatrix::<T>::identity(n, n) * mu;
            let mut pw = CMatrix::<T>::identity(n, n);
            let mut prev = n;
            let mut index = alg;
            for k in 1..=alg {
                pw = &pw * &shifted;
                let r = rank(&pw, tol);
                if r == prev {
                    index = k - 1;
                    break;
                }
                prev = r;
                if r + alg == n {
                    index = k;
                    break;
                }
            }
            let spread = eig.iter().filter(|e| cabs(**e - mu) <= tol).fold(T::zero(), |s, e| s.max(cabs(*e - mu)));
            if alg > 1 && spread > T::zero() {
                log::warn!("near-defective eigenvalue cluster at {mu} (spread {:e})", to_f64(spread));
            }
            (mu, index.max(1))
        })
        .collect()
}

/// Compares `||Psi(A)||` in an induced norm with the calculus bound built
/// from the minimal polynomial of `A`.
pub fn verify_against_matrix<T: Real>(
    a: &CMatrix<T>,
    norm: NormId,
    psi: &RationalFn<T>,
    calc: &CalculusSpec<T>,
    opts: &SolverOpts,
) -> Result<BoundReport<T>> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::InvalidInput("matrix must be square and nonempty".into()));
    }
    for l in eigenvalues(a) {
        if !(cabs(l) < T::one() - lit(BOUNDARY_EPS)) {
            return Err(Error::SpectrumOutsideDisk { modulus: to_f64(cabs(l)) });
        }
    }
    let a_norm = induced_norm(a, norm);
    let contraction = a_norm <= T::one() + lit(1e-12);
    if calc.space.is_wiener() && !contraction {
        return Err(Error::NotAContraction { norm: to_f64(a_norm) });
    }
    let verified = contraction
        && calc.c >= T::one()
        && (calc.space.is_wiener() || (calc.space.is_hinfinity() && norm == NormId::Spectral));
    let family = family_from_clusters(&minimal_polynomial_of(a))?;
    let bound = bound_for_family(&family, psi, calc, opts)?;
    let actual = induced_norm(&rational_of_matrix(psi, a)?.value, norm);
    if verified && actual > bound.upper + lit(1e-9) {
        log::error!(
            "bound violated on a verified input: {:e} > {:e}",
            to_f64(actual),
            to_f64(bound.upper)
        );
    }
    Ok(BoundReport {
        bound,
        actual: Some(actual),
        ratio: Some(actual / bound.upper),
        hypothesis: Some(if verified { Hypothesis::Verified } else { Hypothesis::Unverified }),
    })
}

/// Random upper-triangular row-sum contraction with eigenvalue moduli in
/// `[min_modulus, max_modulus]`.
pub fn random_triangular_contraction<T: Real>(
    n: usize,
    min_modulus: f64,
    max_modulus: f64,
    rng: &mut impl Rng,
) -> CMatrix<T> {
    let mut a = CMatrix::<T>::zeros(n, n);
    for i in 0..n {
        let r = rng.gen_range(min_modulus..=max_modulus);
        let d = cis(lit::<T>(rng.gen_range(0.0..std::f64::consts::TAU))) * lit::<T>(r);
        a[(i, i)] = d;
        if i + 1 < n {
            let raw: Vec<Cx<f64>> = (i + 1..n).map(|_| cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let total: f64 = raw.iter().map(|z| z.norm()).sum();
            let budget = (1.0 - r) * rng.gen_range(0.0..1.0);
            for (t, z) in raw.iter().enumerate() {
                let v = if total > 0.0 { *z * (budget / total) } else { *z * 0.0 };
                a[(i, i + 1 + t)] = Cx::new(lit(v.re), lit(v.im));
            }
        }
    }
    a
}

/// Summary of a seeded soundness run.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessReport {
    pub samples: usize,
    /// Indices of samples where `actual > bound.upper + 1e-9`.
    pub violations: Vec<usize>,
    pub max_ratio: f64,
    pub ratios: Vec<f64>,
}

/// Checks `||Psi(A)||_rowsum <= bound` on random triangular contractions of
/// size `1..=max_dim`, spectra in `0.05 <= |z| <= 0.9`, with the Wiener
/// calculus (`c = 1`). Sample `s` uses its own seed, so the report does not
/// depend on scheduling.
pub fn soundness_harness(
    psi: &RationalFn<f64>,
    samples: usize,
    max_dim: usize,
    opts: &SolverOpts,
) -> Result<HarnessReport> {
    let calc = CalculusSpec::new(SpaceSpec::wiener(), 1.0)?;
    let results: Vec<Result<(f64, bool)>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.restart_seed(s));
            let n = rng.gen_range(1..=max_dim);
            let a = random_triangular_contraction::<f64>(n, 0.05, 0.9, &mut rng);
            let r = verify_against_matrix(&a, NormId::RowSum, psi, &calc, opts)?;
            let actual = r.actual.unwrap_or(0.0);
            Ok((actual / r.bound.upper, actual > r.bound.upper + 1e-9))
        })
        .collect();
    let mut violations = Vec::new();
    let mut ratios = Vec::with_capacity(samples);
    for (s, r) in results.into_iter().enumerate() {
        let (ratio, violated) = r?;
        if violated {
            violations.push(s);
        }
        ratios.push(ratio);
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(HarnessReport { samples, violations, max_ratio, ratios })
}
