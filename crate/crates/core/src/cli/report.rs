//! Report records. Field order is the serialization order.

use serde::{Deserialize, Serialize};

use crate::opts::SolverOpts;

use super::schema::Pair;
use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveOptions {
    pub tol: f64,
    pub restarts: usize,
    pub seed: Option<u64>,
    pub degree: usize,
    pub truncation_tol: f64,
    pub max_iter: usize,
    pub gap_slack: f64,
}

impl EffectiveOptions {
    pub fn new(opts: &SolverOpts, seed: Option<u64>, degree: usize) -> Self {
        EffectiveOptions {
            tol: opts.tol,
            restarts: opts.restarts,
            seed,
            degree,
            truncation_tol: opts.truncation_tol,
            max_iter: opts.max_iter,
            gap_slack: opts.gap_slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpNormReport {
    pub command: String,
    pub space: String,
    pub dimension: usize,
    /// `kernel_dual` for sequence spaces, `model_matrix` for `H^infinity`.
    pub dual_route: String,
    pub dual_lower: f64,
    pub dual_upper: f64,
    pub primal_upper: f64,
    /// `primal_upper - dual_lower`.
    pub gap: Option<f64>,
    pub relative_gap: Option<f64>,
    pub dual_converged: bool,
    pub primal_converged: bool,
    pub alpha_star: Option<Vec<Pair>>,
    pub truncation: Option<usize>,
    /// Ascending coefficients of the primal polynomial.
    pub poly_star: Vec<Pair>,
    pub degree_used: usize,
    pub max_residual: f64,
    pub effective_options: EffectiveOptions,
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickCheckReport {
    pub command: String,
    pub space: String,
    pub dimension: usize,
    pub c_min: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub psd_margin: f64,
    /// Margin tolerance `1e-9 * ||Q||` used for the verdict.
    pub margin_tol: f64,
    pub verdict: String,
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelChecksRecord {
    pub lower_triangular: bool,
    pub diagonal_matches_nodes: bool,
    pub annihilation_residual: f64,
    pub gram_oracle_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMatrixReport {
    pub command: String,
    pub dimension: usize,
    /// Multiplicity-expanded nodes (the diagonal).
    pub nodes: Vec<Pair>,
    /// Row-major entries.
    pub entries: Vec<Vec<Pair>>,
    pub checks: ModelChecksRecord,
    /// First Taylor coefficients of each Malmquist-Walsh basis function.
    pub basis_windows: Vec<Vec<Pair>>,
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiRecord {
    pub num: Vec<Pair>,
    pub den: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixBoundReport {
    pub command: String,
    /// `matrix` or `minimal_polynomial`.
    pub source: String,
    pub calculus_space: String,
    pub calculus_c: f64,
    pub norm: Option<String>,
    pub psi: PsiRecord,
    pub bound_lower: f64,
    pub bound_upper: f64,
    /// True unless the induced norm was computed exactly (`H^2` coordinates).
    pub upper_is_heuristic: bool,
    pub actual: Option<f64>,
    pub ratio: Option<f64>,
    /// `verified` or `unverified`; absent without a matrix.
    pub hypothesis: Option<String>,
    pub effective_options: EffectiveOptions,
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: ErrorRecord,
}

impl From<&CliError> for ErrorReport {
    fn from(e: &CliError) -> Self {
        ErrorReport { error: ErrorRecord { kind: e.kind.to_string(), message: e.message.clone() } }
    }
}
