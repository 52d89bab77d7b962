//! Command-line front end. Every command reads a JSON problem file (see
//! `docs/schema.md`) and writes one JSON report.
//!
//! Exit codes: 0 success, 1 input error, 2 non-convergence (the best-effort
//! report is still written), 3 violated mathematical precondition.

mod commands;
pub mod json;
pub mod report;
pub mod schema;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;

pub use commands::{execute, Outcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dualinterp", version, about = "Minimal-norm interpolation bounds and Pick-type criteria")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dual lower and primal upper bounds on the minimal interpolation norm.
    InterpNorm {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Least Pick constant and the PSD margin at a given C (H2 or Hinf spaces).
    PickCheck {
        file: PathBuf,
        /// Constant at which to evaluate the Pick matrix.
        #[arg(long = "C", value_name = "C")]
        c: f64,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Compressed shift in Malmquist-Walsh coordinates with invariant checks.
    ModelMatrix {
        file: PathBuf,
        /// Number of Taylor coefficients of each basis function to report.
        #[arg(long, default_value_t = 16)]
        window: usize,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Functional-calculus bound for Psi(T), optionally checked on a matrix.
    MatrixBound {
        file: PathBuf,
        /// Psi as "p/q": comma-separated ascending coefficients, each `re` or `re:im`.
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        #[command(flatten)]
        solver: SolverFlags,
        #[command(flatten)]
        output: OutputFlags,
    },
}

/// Solver settings; each overrides the file's `options`, which override the
/// defaults shown.
#[derive(Debug, Clone, Default, Args)]
pub struct SolverFlags {
    /// Relative stationarity tolerance [default: 1e-8]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Random starts per search [default: 16]
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Seed for every randomized search (required when a search is randomized)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Polynomial degree of the primal search [default: 60]
    #[arg(long)]
    pub degree: Option<usize>,
    /// Tail tolerance of truncated series [default: 1e-12]
    #[arg(long = "truncation-tol")]
    pub truncation_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputFlags {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a CSV series here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Record wall-clock time in the report (makes output nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

/// Failure reported as `{"error": {"kind", "message"}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn parse(message: String) -> Self {
        CliError { kind: "parse", message, exit: EXIT_INPUT }
    }

    pub fn input(kind: &'static str, message: impl Into<String>) -> Self {
        CliError { kind, message: message.into(), exit: EXIT_INPUT }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (kind, exit) = match &e {
            Error::InvalidInput(_) => ("validation", EXIT_INPUT),
            Error::UnsupportedSpace(_) => ("unsupported_space", EXIT_INPUT),
            Error::DegenerateNodes(_) => ("degenerate_nodes", EXIT_INPUT),
            Error::DegreeTooSmall { .. } => ("degree_too_small", EXIT_INPUT),
            Error::NoConvergence(_) => ("no_convergence", EXIT_NO_CONVERGENCE),
            Error::BoundaryNode { .. } => ("boundary_node", EXIT_PRECONDITION),
            Error::PoleInDisk { .. } => ("pole_in_disk", EXIT_PRECONDITION),
            Error::PoleOnSpectrum { .. } => ("pole_on_spectrum", EXIT_PRECONDITION),
            Error::RootOnBoundary { .. } => ("root_on_boundary", EXIT_PRECONDITION),
            Error::SpectrumOutsideDisk { .. } => ("spectrum_outside_disk", EXIT_PRECONDITION),
            Error::NotAContraction { .. } => ("not_a_contraction", EXIT_PRECONDITION),
        };
        CliError { kind, message: e.to_string(), exit }
    }
}

/// Parses arguments, runs the command and writes its outputs. Returns the
/// process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            eprint!("{e}");
            let err = CliError::input("usage", e.kind().to_string());
            print!("{}", json::to_string(&report::ErrorReport::from(&err)));
            return EXIT_INPUT;
        }
    };
    let output = match &cli.command {
        Command::InterpNorm { output, .. }
        | Command::PickCheck { output, .. }
        | Command::ModelMatrix { output, .. }
        | Command::MatrixBound { output, .. } => output.clone(),
    };
    let outcome = execute(&cli.command);
    let write = |path: &Option<PathBuf>, text: &str| -> std::io::Result<()> {
        match path {
            Some(p) => std::fs::write(p, text),
            None => {
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()
            }
        }
    };
    if let Some(e) = &outcome.error {
        eprintln!("error ({}): {}", e.kind, e.message);
    }
    if let Err(e) = write(&output.out, &outcome.report) {
        eprintln!("cannot write report: {e}");
        return EXIT_INPUT;
    }
    if let (Some(path), Some(csv)) = (&output.csv, &outcome.csv) {
        if let Err(e) = std::fs::write(path, csv) {
            eprintln!("cannot write csv: {e}");
            return EXIT_INPUT;
        }
    }
    outcome.exit
}
