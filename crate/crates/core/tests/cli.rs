use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dualinterp::cli::report::{ErrorReport, InterpNormReport, MatrixBoundReport, ModelMatrixReport, PickCheckReport};

fn problems() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualinterp")).args(args).output().unwrap()
}

fn run_file(cmd: &str, file: &Path, rest: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualinterp"))
        .arg(cmd)
        .arg(file)
        .args(rest)
        .output()
        .unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn error_kind(out: &Output) -> String {
    serde_json::from_slice::<ErrorReport>(&out.stdout).unwrap().error.kind
}

#[test]
fn wiener_single_node_report() {
    let out = run_file("interp-norm", &problems().join("wiener_single.json"), &["--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r: InterpNormReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.dual_route, "kernel_dual");
    assert!(r.dual_lower <= r.primal_upper + 1e-9);
    assert!((r.primal_upper - 0.7).abs() < 1e-9 && (r.dual_lower - 0.7).abs() < 1e-6);
    assert!(r.runtime_ms.is_none());
    assert!(r.max_residual <= 1e-10);
}

#[test]
fn hinfinity_interp_norm_uses_model_route() {
    let out = run_file("interp-norm", &problems().join("schwarz.json"), &["--seed", "1", "--degree", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let r: InterpNormReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.dual_route, "model_matrix");
    assert!((r.dual_lower - 1.0).abs() < 1e-10);
    assert!(r.primal_upper >= r.dual_lower - 1e-9);
}

#[test]
fn pick_check_verdicts() {
    let f = problems().join("schwarz.json");
    let ok: PickCheckReport = serde_json::from_slice(&run_file("pick-check", &f, &["--C", "1.0"]).stdout).unwrap();
    assert!((ok.c_min - 1.0).abs() < 1e-10);
    assert_eq!(ok.verdict, "feasible");
    let bad: PickCheckReport = serde_json::from_slice(&run_file("pick-check", &f, &["--C", "0.9"]).stdout).unwrap();
    assert_eq!(bad.verdict, "infeasible");
    assert!(bad.psd_margin < 0.0);
}

#[test]
fn model_matrix_of_zero_jet_is_shift() {
    let out = run_file("model-matrix", &problems().join("jordan_zero.json"), &[]);
    assert_eq!(out.status.code(), Some(0));
    let r: ModelMatrixReport = serde_json::from_slice(&out.stdout).unwrap();
    for (i, row) in r.entries.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            assert_eq!(*z, [if i == j + 1 { 1.0 } else { 0.0 }, 0.0]);
        }
    }
    assert!(r.checks.lower_triangular && r.checks.diagonal_matches_nodes);
}

#[test]
fn matrix_bound_holds_on_contraction() {
    let out = run_file(
        "matrix-bound",
        &problems().join("triangular_contraction.json"),
        &["--psi", "1/0,1", "--seed", "5", "--restarts", "4"],
    );
    assert_eq!(out.status.code(), Some(0));
    let r: MatrixBoundReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.hypothesis.as_deref(), Some("verified"));
    assert!(r.actual.unwrap() <= r.bound_upper + 1e-9);
}

#[test]
fn report_round_trips_through_out_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let csv_path = dir.path().join("r.csv");
    let out = run_file(
        "pick-check",
        &problems().join("schwarz.json"),
        &["--C", "1.2", "--out", out_path.to_str().unwrap(), "--csv", csv_path.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let r: PickCheckReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.c, 1.2);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("C,margin\n"));
    assert_eq!(csv.lines().count(), 202);
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "bad.json", "{\"version\": 1, \"nodes\": [");
    let out = run_file("interp-norm", &p, &["--seed", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "parse");
}

#[test]
fn unknown_field_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "extra.json", r#"{"version": 1, "nodes": [], "colour": "red"}"#);
    let out = run_file("model-matrix", &p, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "parse");
}

#[test]
fn missing_seed_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(
        &dir,
        "noseed.json",
        r#"{"version": 1, "space": {"family": "wiener"}, "nodes": [{"lambda": [0.5, 0.0], "targets": [[1.0, 0.0]]}]}"#,
    );
    let out = run_file("interp-norm", &p, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "missing_seed");
}

#[test]
fn boundary_node_is_a_precondition_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(
        &dir,
        "edge.json",
        r#"{"version": 1, "space": {"family": "hardy2"}, "nodes": [{"lambda": [1.0, 0.0], "targets": [[1.0, 0.0]]}]}"#,
    );
    let out = run_file("interp-norm", &p, &["--seed", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "boundary_node");
}

#[test]
fn pole_on_spectrum_exit_code() {
    let out = run_file("matrix-bound", &problems().join("jordan_zero.json"), &["--psi", "1/0,1"]);
    // jordan_zero has no matrix or minimal polynomial, so this is an input error
    assert_eq!(out.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(
        &dir,
        "nilpotent.json",
        r#"{"version": 1, "matrix": [[[0.0, 0.0], [0.5, 0.0]], [[0.0, 0.0], [0.0, 0.0]]], "calculus": {"space": {"family": "hardy2"}, "c": 1.0}}"#,
    );
    let out = run_file("matrix-bound", &p, &["--psi", "1/0,1"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "pole_on_spectrum");
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["interp-norm"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "usage");
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
}
