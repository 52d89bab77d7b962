use std::path::Path;
use std::time::Instant;

use crate::dual_solver::dual_norm;
use crate::error::{Error, SolveError};
use crate::linalg::NormId;
use crate::matrix_bounds::{compute_bound, verify_against_matrix, Hypothesis};
use crate::model_operator::{build_model_matrix, gram_oracle, hinf_interp_norm, StarNorm};
use crate::opts::SolverOpts;
use crate::pick_matrix::{pick_min_c_hinf, pick_report_h2};
use crate::primal_solver::primal_min;
use crate::rational_core::{Poly, RationalFn};
use crate::scalar::Cx;

use super::json::{float, to_string};
use super::report::*;
use super::schema::{Pair, ProblemFile};
use super::{CliError, Command, OutputFlags, SolverFlags, EXIT_NO_CONVERGENCE, EXIT_OK};

const DEFAULT_DEGREE: usize = 60;

/// Report text, optional CSV text and exit code of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub csv: Option<String>,
    pub exit: i32,
    pub error: Option<CliError>,
}

impl Outcome {
    fn failed(e: CliError) -> Self {
        Outcome { report: to_string(&ErrorReport::from(&e)), csv: None, exit: e.exit, error: Some(e) }
    }
}

fn pair(z: Cx<f64>) -> Pair {
    [z.re, z.im]
}

fn load(path: &Path) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
    ProblemFile::parse(&text)
}

struct Resolved {
    opts: SolverOpts,
    seed: Option<u64>,
    degree: usize,
}

fn resolve(file: &ProblemFile, flags: &SolverFlags, need_seed: bool) -> Result<Resolved, CliError> {
    let o = &file.options;
    let seed = flags.seed.or(o.seed);
    if need_seed && seed.is_none() {
        return Err(CliError::input("missing_seed", "this command runs a seeded search; pass --seed or options.seed"));
    }
    let mut opts = SolverOpts::with_seed(seed.unwrap_or(0));
    if let Some(t) = flags.tol.or(o.tol) {
        opts.tol = t;
    }
    if let Some(r) = flags.restarts.or(o.restarts) {
        opts.restarts = r;
    }
    if let Some(t) = flags.truncation_tol.or(o.truncation_tol) {
        opts.truncation_tol = t;
    }
    if !(opts.tol > 0.0) || !(opts.truncation_tol > 0.0) || opts.restarts == 0 {
        return Err(CliError::from(Error::InvalidInput(
            "tol and truncation-tol must be positive, restarts at least 1".into(),
        )));
    }
    let degree = flags.degree.or(o.degree).unwrap_or(DEFAULT_DEGREE);
    Ok(Resolved { opts, seed, degree })
}

fn elapsed(start: Instant, output: &OutputFlags) -> Option<f64> {
    output.timing.then(|| start.elapsed().as_secs_f64() * 1e3)
}

/// Runs one parsed command.
pub fn execute(command: &Command) -> Outcome {
    let start = Instant::now();
    let r = match command {
        Command::InterpNorm { file, solver, output } => interp_norm(file, solver, output, start),
        Command::PickCheck { file, c, output } => pick_check(file, *c, output, start),
        Command::ModelMatrix { file, window, output } => model_matrix(file, *window, output, start),
        Command::MatrixBound { file, psi, solver, output } => matrix_bound(file, psi, solver, output, start),
    };
    r.unwrap_or_else(Outcome::failed)
}

fn interp_norm(path: &Path, flags: &SolverFlags, output: &OutputFlags, start: Instant) -> Result<Outcome, CliError> {
    let file = load(path)?;
    let problem = file.problem()?;
    let res = resolve(&file, flags, true)?;
    let opts = &res.opts;

    let (dual_route, dual_lower, dual_upper, dual_ok, alpha, truncation) = if problem.space.is_hinfinity() {
        let v = hinf_interp_norm(&problem.family, &problem.targets)?;
        ("model_matrix", v, v, true, None, None)
    } else {
        let (cert, ok) = match dual_norm(&problem, opts) {
            Ok(c) => (c, true),
            Err(SolveError::NoConvergence(c)) => (*c, false),
            Err(SolveError::Input(e)) => return Err(e.into()),
        };
        let alpha = cert.alpha_star.iter().map(|&z| pair(z)).collect();
        ("kernel_dual", cert.value_lower, cert.value_upper, ok, Some(alpha), Some(cert.truncation))
    };
    let (primal, primal_ok) = match primal_min(&problem, res.degree, opts) {
        Ok(c) => (c, true),
        Err(SolveError::NoConvergence(c)) => (*c, false),
        Err(SolveError::Input(e)) => return Err(e.into()),
    };

    let csv = if output.csv.is_some() {
        let n = problem.targets.len();
        let mut lines = String::from("degree,primal_value\n");
        let lo = n.saturating_sub(1);
        let mut degs: Vec<usize> = (lo..=res.degree).step_by(5).collect();
        if degs.last() != Some(&res.degree) {
            degs.push(res.degree);
        }
        for d in degs {
            let v = match primal_min(&problem, d, opts) {
                Ok(c) => c.value_upper,
                Err(e) => match e.into_best() {
                    Some(c) => c.value_upper,
                    None => f64::NAN,
                },
            };
            lines.push_str(&format!("{d},{}\n", float(v)));
        }
        Some(lines)
    } else {
        None
    };

    let gap = primal.value_upper - dual_lower;
    let report = InterpNormReport {
        command: "interp-norm".into(),
        space: problem.space.to_string(),
        dimension: problem.targets.len(),
        dual_route: dual_route.into(),
        dual_lower,
        dual_upper,
        primal_upper: primal.value_upper,
        gap: Some(gap),
        relative_gap: (primal.value_upper > 0.0).then(|| gap / primal.value_upper),
        dual_converged: dual_ok,
        primal_converged: primal_ok,
        alpha_star: alpha,
        truncation,
        poly_star: primal.poly_star.coeffs().iter().map(|&z| pair(z)).collect(),
        degree_used: primal.degree_used,
        max_residual: problem.residual(&primal.poly_star),
        effective_options: EffectiveOptions::new(opts, res.seed, res.degree),
        runtime_ms: elapsed(start, output),
    };
    let exit = if dual_ok && primal_ok { EXIT_OK } else { EXIT_NO_CONVERGENCE };
    Ok(Outcome { report: to_string(&report), csv, exit, error: None })
}

fn pick_check(path: &Path, c: f64, output: &OutputFlags, start: Instant) -> Result<Outcome, CliError> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::InvalidInput("--C must be a nonnegative number".into()).into());
    }
    let file = load(path)?;
    let space = file.space()?;
    let family = file.family()?;
    let targets = file.targets()?;
    let report = if space.is_hinfinity() {
        pick_min_c_hinf(&family, &targets).map_err(|e| match e {
            Error::DegenerateNodes(_) => CliError::input(
                "degenerate_nodes",
                "H-infinity data with repeated nodes: use the model-matrix route (interp-norm with space hinfinity)",
            ),
            e => e.into(),
        })?
    } else if space.is_hardy2() {
        pick_report_h2(&family, &targets)?
    } else {
        return Err(Error::UnsupportedSpace(format!("{space}; pick-check needs hardy2 or hinfinity")).into());
    };
    let tol = 1e-9 * report.q_norm();
    let margin = report.psd_margin_at(c);
    let csv = output.csv.as_ref().map(|_| {
        let top = 2.0 * report.c_min.max(c).max(1e-3);
        let mut s = String::from("C,margin\n");
        for i in 0..=200 {
            let ci = top * i as f64 / 200.0;
            s.push_str(&format!("{},{}\n", float(ci), float(report.psd_margin_at(ci))));
        }
        s
    });
    let rec = PickCheckReport {
        command: "pick-check".into(),
        space: space.to_string(),
        dimension: targets.len(),
        c_min: report.c_min,
        c,
        psd_margin: margin,
        margin_tol: tol,
        verdict: if margin >= -tol { "feasible" } else { "infeasible" }.into(),
        runtime_ms: elapsed(start, output),
    };
    Ok(Outcome { report: to_string(&rec), csv, exit: EXIT_OK, error: None })
}

fn model_matrix(path: &Path, window: usize, output: &OutputFlags, start: Instant) -> Result<Outcome, CliError> {
    let file = load(path)?;
    let family = file.family()?;
    let m = build_model_matrix(&family);
    let checks = m.checks();
    let rho = family.max_modulus();
    let k_last = if rho > 0.0 {
        ((-40.0 / rho.ln()).ceil() as usize + 20 * family.max_multiplicity()).clamp(64, 200_000)
    } else {
        64
    };
    let oracle = gram_oracle(&family, k_last)?;
    let oracle_residual = (&oracle - &m.entries).iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let sn = StarNorm::new(&crate::spaces::SpaceSpec::hardy2(), &family, 1e-12)?;
    let basis_windows = sn
        .streams()
        .iter()
        .map(|s| (0..window).map(|k| pair(s.coeff(k).unwrap_or_default())).collect())
        .collect();
    let n = m.dim();
    let entries = (0..n).map(|i| (0..n).map(|j| pair(m.entries[(i, j)])).collect()).collect();
    let csv = output.csv.as_ref().map(|_| {
        let mut s = String::from("row,col,re,im\n");
        for i in 0..n {
            for j in 0..n {
                let z = m.entries[(i, j)];
                s.push_str(&format!("{i},{j},{},{}\n", float(z.re), float(z.im)));
            }
        }
        s
    });
    let rec = ModelMatrixReport {
        command: "model-matrix".into(),
        dimension: n,
        nodes: family.expanded().iter().map(|&z| pair(z)).collect(),
        entries,
        checks: ModelChecksRecord {
            lower_triangular: checks.lower_triangular,
            diagonal_matches_nodes: checks.diagonal_matches_nodes,
            annihilation_residual: checks.annihilation_residual,
            gram_oracle_residual: oracle_residual,
        },
        basis_windows,
        runtime_ms: elapsed(start, output),
    };
    Ok(Outcome { report: to_string(&rec), csv, exit: EXIT_OK, error: None })
}

fn parse_coeff(s: &str) -> Result<Cx<f64>, CliError> {
    let bad = || CliError::parse(format!("bad coefficient {s:?} in --psi"));
    let mut it = s.trim().splitn(2, ':');
    let re: f64 = it.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = match it.next() {
        Some(t) => t.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    Ok(Cx::new(re, im))
}

/// Parses `"p/q"` with comma-separated ascending coefficients; `q`
/// defaults to 1.
pub fn parse_psi(spec: &str) -> Result<RationalFn<f64>, CliError> {
    let poly = |s: &str| -> Result<Poly<f64>, CliError> {
        let c = s.split(',').map(parse_coeff).collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(c))
    };
    let (p, q) = match spec.split_once('/') {
        Some((p, q)) => (poly(p)?, poly(q)?),
        None => (poly(spec)?, Poly::one()),
    };
    Ok(RationalFn::new(p, q)?)
}

fn matrix_bound(
    path: &Path,
    psi_text: &str,
    flags: &SolverFlags,
    output: &OutputFlags,
    start: Instant,
) -> Result<Outcome, CliError> {
    let psi = parse_psi(psi_text)?;
    let file = load(path)?;
    let calc = file.calculus()?;
    let exact = calc.space.is_hardy2() || calc.space.is_hinfinity();
    let res = resolve(&file, flags, !exact)?;
    let opts = &res.opts;
    let norm: NormId = file.norm.map(Into::into).unwrap_or(NormId::Spectral);
    let (source, report) = match (file.matrix()?, file.minimal_polynomial()) {
        (Some(a), _) => ("matrix", verify_against_matrix(&a, norm, &psi, &calc, opts)?),
        (None, Some(m)) => ("minimal_polynomial", compute_bound(&m, &psi, &calc, opts)?),
        (None, None) => {
            return Err(Error::InvalidInput("matrix-bound needs matrix or minimal_polynomial".into()).into())
        }
    };
    let rec = MatrixBoundReport {
        command: "matrix-bound".into(),
        source: source.into(),
        calculus_space: calc.space.to_string(),
        calculus_c: calc.c,
        norm: (source == "matrix").then(|| format!("{norm:?}").to_lowercase()),
        psi: PsiRecord {
            num: psi.num().coeffs().iter().map(|&z| pair(z)).collect(),
            den: psi.den().coeffs().iter().map(|&z| pair(z)).collect(),
        },
        bound_lower: report.bound.lower,
        bound_upper: report.bound.upper,
        upper_is_heuristic: !exact,
        actual: report.actual,
        ratio: report.ratio,
        hypothesis: report.hypothesis.map(|h| match h {
            Hypothesis::Verified => "verified".into(),
            Hypothesis::Unverified => "unverified".into(),
        }),
        effective_options: EffectiveOptions::new(opts, res.seed, res.degree),
        runtime_ms: elapsed(start, output),
    };
    Ok(Outcome { report: to_string(&rec), csv: None, exit: EXIT_OK, error: None })
}
