//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use dualinterp::linalg::{poly_of_matrix, NormId};
use dualinterp::matrix_bounds::{soundness_harness, Hypothesis};
use dualinterp::model_operator::{build_model_matrix, hinf_interp_norm, star_operator_norm, StarNorm};
use dualinterp::primal_solver::hermite_interpolant;
use dualinterp::scalar::{cis, cx};
use dualinterp::spaces::{y_norm_combo, KernelCombo};
use dualinterp::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Instance {
    family: Family64,
    targets: Vec<C64>,
}

fn in_disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    cis(rng.gen_range(0.0..std::f64::consts::TAU)) * (radius * rng.gen::<f64>().sqrt())
}

// Distinct nodes at least 0.05 apart.
fn nodes(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::with_capacity(n);
    while out.len() < n {
        let l = in_disk(rng, radius);
        if out.iter().all(|m| (m - l).norm() >= 0.05) {
            out.push(l);
        }
    }
    out
}

fn instances(seed: u64, count: usize, max_n: usize, radius: f64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=max_n);
            let ls = nodes(&mut rng, n, radius);
            let targets = (0..n).map(|_| in_disk(&mut rng, 1.0)).collect();
            Instance { family: KernelFamily::simple(&ls).unwrap(), targets }
        })
        .collect()
}

fn problem(space: &Space64, inst: &Instance) -> Problem64 {
    InterpolationProblem::new(space.clone(), inst.family.clone(), inst.targets.clone()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn hardy_three_way() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (i, inst) in instances(101, 50, 4, 0.8).iter().enumerate() {
        let p = problem(&SpaceSpec::hardy2(), inst);
        let opts = SolverOpts::with_seed(i as u64);
        let pick = pick_min_c_h2(&inst.family, &inst.targets).unwrap();
        let dual = dual_norm(&p, &opts).map(|c| c.value_lower);
        let primal = primal_min(&p, 60, &opts).map(|c| c.value_upper);
        match (dual, primal) {
            (Ok(d), Ok(u)) => {
                let e = rel(pick, d).max(rel(pick, u)).max(rel(d, u));
                worst = worst.max(e);
                if e > 1e-5 {
                    failures.push(i);
                }
            }
            _ => failures.push(i),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: failures.is_empty() && secs < 30.0,
        detail: format!("max pairwise rel diff {worst:.2e} (tol 1e-5), {secs:.1}s (limit 30s), failing {failures:?}"),
    }
}

fn hinf_identity() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for inst in instances(101, 50, 4, 0.8) {
        let pick = pick_min_c_hinf(&inst.family, &inst.targets).unwrap().c_min;
        let model = hinf_interp_norm(&inst.family, &inst.targets).unwrap();
        worst = worst.max((pick - model).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1e-8 && secs < 5.0,
        detail: format!("max |Pick - model| {worst:.2e} (tol 1e-8), {secs:.2}s (limit 5s)"),
    }
}

fn wiener_cross_check() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (i, inst) in instances(303, 20, 3, 0.7).iter().enumerate() {
        let opts = SolverOpts::with_seed(i as u64);
        let dual = match dual_norm(&problem(&SpaceSpec::wiener(), inst), &opts) {
            Ok(c) => c.value_lower,
            Err(_) => {
                failures.push(i);
                continue;
            }
        };
        let g = hermite_interpolant(&inst.family, &inst.targets).unwrap();
        let m = build_model_matrix(&inst.family);
        let a = poly_of_matrix(&g, &m.entries).adjoint();
        let sn = StarNorm::new(&SpaceSpec::wiener(), &inst.family, 1e-12).unwrap();
        let star = star_operator_norm(&sn, &a, &opts).unwrap().lower;
        let e = rel(dual, star);
        worst = worst.max(e);
        if e > 1e-3 {
            failures.push(i);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: failures.is_empty() && secs < 60.0,
        detail: format!("max rel diff {worst:.2e} (tol 1e-3), {secs:.1}s (limit 60s), failing {failures:?}"),
    }
}

fn sandwich() -> Outcome {
    let spaces = [
        ("W", SpaceSpec::wiener()),
        ("H2", SpaceSpec::hardy2()),
        ("l1(1)", SpaceSpec::beurling_sobolev(Exponent::Finite(1.0), 1.0).unwrap()),
        ("l4(-0.5)", SpaceSpec::beurling_sobolev(Exponent::Finite(4.0), -0.5).unwrap()),
    ];
    let mut worst_gap = 0.0f64;
    let mut failures = Vec::new();
    for (i, inst) in instances(404, 20, 4, 0.8).iter().enumerate() {
        let opts = SolverOpts::with_seed(i as u64);
        for (name, space) in &spaces {
            let p = problem(space, inst);
            let lower = dual_norm(&p, &opts).map(|c| c.value_lower).or_else(|e| {
                e.into_best().map(|c| c.value_lower).ok_or(())
            });
            let upper = primal_min(&p, 60, &opts).map(|c| c.value_upper).or_else(|e| {
                e.into_best().map(|c| c.value_upper).ok_or(())
            });
            match (lower, upper) {
                (Ok(l), Ok(u)) => {
                    let gap = (u - l) / u;
                    worst_gap = worst_gap.max(gap);
                    if l > u + 1e-9 || gap > 1e-3 {
                        failures.push(format!("{i}/{name}"));
                    }
                }
                _ => failures.push(format!("{i}/{name} error")),
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("80 solves, max relative gap {worst_gap:.2e} (tol 1e-3), failing {failures:?}"),
    }
}

fn schwarz() -> Outcome {
    let fam = KernelFamily::simple(&[cx(0.0f64, 0.0), cx(0.5, 0.0)]).unwrap();
    let w = vec![cx(0.0, 0.0), cx(0.5, 0.0)];
    let pick = pick_min_c_hinf(&fam, &w).unwrap().c_min;
    let model = hinf_interp_norm(&fam, &w).unwrap();
    let p = InterpolationProblem::new(SpaceSpec::wiener(), fam, w).unwrap();
    let wiener = dual_norm(&p, &SolverOpts::with_seed(5)).unwrap().value_lower;
    let pass = (pick - 1.0).abs() <= 1e-8 && (model - 1.0).abs() <= 1e-8 && wiener >= 1.0 - 1e-6;
    Outcome {
        pass,
        detail: format!("Pick {pick:.12}, model {model:.12}, Wiener dual lower {wiener:.9}"),
    }
}

// Malmquist-Walsh basis evaluated straight from its product formula.
fn mw_eval(ls: &[C64], j: usize, z: C64) -> C64 {
    let mut v = (1.0 - ls[j].norm_sqr()).sqrt() / (1.0 - ls[j].conj() * z);
    for l in &ls[..j] {
        v *= (z - l) / (1.0 - l.conj() * z);
    }
    v
}

fn model_matrix_formula() -> Outcome {
    const SAMPLES: usize = 4096;
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n = rng.gen_range(1..=5);
        let ls = nodes(&mut rng, n, 0.8);
        let fam = KernelFamily::simple(&ls).unwrap();
        let m = build_model_matrix(&fam);
        let pts: Vec<C64> = (0..SAMPLES)
            .map(|s| cis(std::f64::consts::TAU * s as f64 / SAMPLES as f64))
            .collect();
        let vals: Vec<Vec<C64>> = (0..n).map(|j| pts.iter().map(|&z| mw_eval(&ls, j, z)).collect()).collect();
        for i in 0..n {
            for j in 0..n {
                let ip = pts
                    .iter()
                    .enumerate()
                    .fold(cx(0.0, 0.0), |acc, (s, &z)| acc + z * vals[j][s] * vals[i][s].conj())
                    / SAMPLES as f64;
                worst = worst.max((ip - m.entries[(i, j)]).norm());
            }
        }
    }
    let jordan = build_model_matrix(&KernelFamily::new(vec![Node::new(cx(0.0f64, 0.0), 4).unwrap()]).unwrap());
    let bitwise = (0..4).all(|i| {
        (0..4).all(|j| {
            let want: f64 = if i == j + 1 { 1.0 } else { 0.0 };
            let z = jordan.entries[(i, j)];
            z.re.to_bits() == want.to_bits() && z.im.to_bits() == 0f64.to_bits()
        })
    });
    Outcome {
        pass: worst <= 1e-10 && bitwise,
        detail: format!("max entry error vs quadrature Gram {worst:.2e} (tol 1e-10), Jordan block bitwise {bitwise}"),
    }
}

fn bound_harness() -> Outcome {
    let start = Instant::now();
    let psi = RationalFn::new(Poly::one(), Poly::monomial(1)).unwrap();
    let mut opts = SolverOpts::with_seed(2024);
    opts.restarts = 4;
    opts.tol = 1e-6;
    opts.truncation_tol = 1e-10;
    let report = soundness_harness(&psi, 1000, 5, &opts).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let calc = CalculusSpec::new(SpaceSpec::hardy2(), 1.0).unwrap();
    let mut min_sharp = f64::INFINITY;
    for _ in 0..10 {
        let n = rng.gen_range(1..=5);
        // 1/z needs an invertible matrix
        let ls = loop {
            let ls = nodes(&mut rng, n, 0.9);
            if ls.iter().all(|l| l.norm() >= 0.05) {
                break ls;
            }
        };
        let m = build_model_matrix(&KernelFamily::simple(&ls).unwrap());
        let r = verify_against_matrix(&m.entries, NormId::Spectral, &psi, &calc, &opts).unwrap();
        assert_eq!(r.hypothesis, Some(Hypothesis::Unverified));
        min_sharp = min_sharp.min(r.ratio.unwrap());
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: report.violations.is_empty() && min_sharp >= 1.0 - 1e-6 && secs < 300.0,
        detail: format!(
            "{} samples, violations {:?}, max ratio {:.6}, Hardy2 sharpness min {min_sharp:.9}, {secs:.0}s (limit 300s)",
            report.samples, report.violations, report.max_ratio
        ),
    }
}

fn enclosure_soundness() -> Outcome {
    const K: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let ps = [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Finite(4.0), Exponent::Infinite];
    let mut failures = Vec::new();
    for i in 0..100 {
        let p = ps[i % 4];
        let beta = [-1.0, 0.0, 1.0][(i / 4) % 3];
        // predual exponent p belongs to X = l^{p'}_A(beta)
        let space = SpaceSpec::beurling_sobolev(p.conjugate(), beta).unwrap();
        let n = rng.gen_range(1..=3);
        let mut nds = Vec::new();
        for l in nodes(&mut rng, n, 0.9) {
            nds.push(Node::new(l, rng.gen_range(1..=2)).unwrap());
        }
        let fam = KernelFamily::new(nds).unwrap();
        let alpha: Vec<C64> = (0..fam.total_dim()).map(|_| in_disk(&mut rng, 1.0)).collect();
        let combo = KernelCombo::new(fam.clone(), alpha.clone()).unwrap();
        let enc = y_norm_combo(&space, &combo, 1e-10).unwrap();

        // brute force from the closed-form kernel coefficients
        let pairs = fam.index_pairs();
        let mut powers: Vec<C64> = vec![cx(1.0, 0.0); pairs.len()];
        let mut acc = 0.0f64;
        for k in 0..=K {
            let mut c = cx(0.0, 0.0);
            for (t, &(l, j)) in pairs.iter().enumerate() {
                if k >= j {
                    let falling: f64 = (0..j).map(|s| (k - s) as f64).product();
                    c += alpha[t] * powers[t] * falling;
                    powers[t] *= l.conj();
                }
            }
            let wk = if k == 0 { 1.0 } else { (k as f64).powf(-beta) };
            let v = wk * c.norm();
            match p {
                Exponent::Infinite => acc = acc.max(v),
                Exponent::Finite(e) => acc += v.powf(e),
            }
        }
        let brute = match p {
            Exponent::Infinite => acc,
            Exponent::Finite(e) => acc.powf(1.0 / e),
        };
        // allow for summation order in the last bits
        let slack = 1e-12 * brute.max(1.0);
        if !(enc.lower - slack <= brute && brute <= enc.upper + slack) {
            failures.push(format!("{i}: [{:e}, {:e}] vs {brute:e}", enc.lower, enc.upper));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("100 combos, failing {failures:?}"),
    }
}

fn cli_determinism() -> Outcome {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems");
    let runs: [&[&str]; 6] = [
        &["interp-norm", "wiener_single.json", "--seed", "11"],
        &["interp-norm", "sobolev_jet.json", "--seed", "3", "--degree", "20"],
        &["pick-check", "schwarz.json", "--C", "1"],
        &["model-matrix", "jordan_zero.json"],
        &["matrix-bound", "triangular_contraction.json", "--psi", "1/0,1", "--seed", "5"],
        &["matrix-bound", "shift_block.json", "--psi", "0,1", "--seed", "9"],
    ];
    let mut failures = Vec::new();
    for args in runs {
        let invoke = || {
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_dualinterp"));
            cmd.arg(args[0]).arg(root.join(args[1])).args(&args[2..]);
            cmd.output().unwrap()
        };
        let a = invoke();
        let b = invoke();
        if a.stdout != b.stdout || a.stdout.is_empty() || !a.status.success() {
            failures.push(args.join(" "));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{} commands run twice, differing or failing {failures:?}", runs.len()),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("H2 three-way agreement", hardy_three_way),
        ("Hinf Pick/model identity", hinf_identity),
        ("Wiener dual vs star operator norm", wiener_cross_check),
        ("primal/dual sandwich", sandwich),
        ("Schwarz anchor", schwarz),
        ("compressed shift formula", model_matrix_formula),
        ("bound soundness harness", bound_harness),
        ("predual enclosure soundness", enclosure_soundness),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {}: {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
