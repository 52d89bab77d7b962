/// Knobs shared by the iterative solvers.
///
/// There is no default seed: every stochastic search is reproducible from
/// the value passed to [`SolverOpts::with_seed`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOpts {
    /// Independent starts of each multi-start search.
    pub restarts: usize,
    /// Relative stationarity tolerance of the local searches.
    pub tol: f64,
    /// Iteration cap per start.
    pub max_iter: usize,
    pub seed: u64,
    /// Width allowed for truncated infinite-series norms (per unit coefficient).
    pub truncation_tol: f64,
    /// Relative slack turning a searched induced-norm lower bound into the
    /// reported (heuristic) upper member.
    pub gap_slack: f64,
}

impl SolverOpts {
    pub fn with_seed(seed: u64) -> Self {
        SolverOpts {
            restarts: 16,
            tol: 1e-8,
            max_iter: 20_000,
            seed,
            truncation_tol: 1e-12,
            gap_slack: 1e-3,
        }
    }

    /// Seed of the `index`-th restart; independent of scheduling.
    pub fn restart_seed(&self, index: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add((index as u64).wrapping_mul(0xD1B5_4A32_D192_ED03))
            ^ 0x5851_F42D_4C95_7F2D
    }
}
