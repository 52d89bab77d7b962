use thiserror::Error;

/// Failures shared by the library's operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node {modulus} lies on or too close to the unit circle")]
    BoundaryNode { modulus: f64 },
    #[error("denominator has a root of modulus {modulus} inside the closed disk")]
    PoleInDisk { modulus: f64 },
    #[error("operation is not available for space {0}")]
    UnsupportedSpace(String),
    #[error("truncation could not reach the requested tolerance: {0}")]
    NoConvergence(String),
    #[error("degree {degree} is too small for {constraints} interpolation constraints")]
    DegreeTooSmall { degree: usize, constraints: usize },
    #[error("pole at distance {distance} from the spectrum")]
    PoleOnSpectrum { distance: f64 },
    #[error("root of modulus {modulus} on or outside the unit circle")]
    RootOnBoundary { modulus: f64 },
    #[error("matrix eigenvalue of modulus {modulus} outside the open unit disk")]
    SpectrumOutsideDisk { modulus: f64 },
    #[error("matrix norm {norm} exceeds 1 in the chosen induced norm")]
    NotAContraction { norm: f64 },
    #[error("degenerate nodes are not supported here: {0}")]
    DegenerateNodes(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Outcome of an iterative solver that may stop before meeting its criterion.
///
/// `NoConvergence` still carries the best certificate found; for the primal and
/// dual solvers that certificate remains a mathematically valid bound.
#[derive(Debug, Clone, Error)]
pub enum SolveError<C: std::fmt::Debug> {
    #[error(transparent)]
    Input(#[from] Error),
    #[error("solver stopped without meeting its stationarity criterion")]
    NoConvergence(Box<C>),
}

impl<C: std::fmt::Debug> SolveError<C> {
    /// Best-effort certificate, if the failure carried one.
    pub fn into_best(self) -> Option<C> {
        match self {
            SolveError::NoConvergence(c) => Some(*c),
            SolveError::Input(_) => None,
        }
    }
}
