pub mod dual_solver;
pub mod error;
pub mod interval;
pub mod linalg;
pub mod matrix_bounds;
mod optimize;
pub mod model_operator;
pub mod opts;
pub mod pick_matrix;
pub mod primal_solver;
pub mod problem;
pub mod rational_core;
pub mod scalar;
pub mod spaces;

pub use dual_solver::{dual_norm, feasibility_check, DualCertificate, Verdict};
pub use error::{Error, Result, SolveError};
pub use interval::Interval;
pub use opts::SolverOpts;
pub use pick_matrix::{pick_min_c_h2, pick_min_c_hinf, pick_report_h2, PickReport};
pub use problem::InterpolationProblem;
pub use primal_solver::{primal_min, PrimalCertificate};
pub use model_operator::{
    build_model_matrix, hinf_interp_norm, lift_to_polynomial, rational_of_matrix, star_norm_vector,
    star_operator_norm, ModelMatrix, StarNorm,
};
pub use matrix_bounds::{compute_bound, verify_against_matrix, BoundReport, CalculusSpec};
pub mod cli;

pub use rational_core::{KernelFamily, Node, Poly, RationalFn};
pub use spaces::{Exponent, SpaceSpec};

pub type C64 = scalar::Cx<f64>;
pub type Family64 = KernelFamily<f64>;
pub type Space64 = SpaceSpec<f64>;
pub type Poly64 = Poly<f64>;
pub type Rational64 = RationalFn<f64>;
pub type Problem64 = InterpolationProblem<f64>;
