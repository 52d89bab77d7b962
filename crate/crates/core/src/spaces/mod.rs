//! Function spaces on the disk, their preduals, and the norms the solvers
//! need: exact `X`-norms of polynomials and certified enclosures of predual
//! norms of kernel combinations.

mod gram;
mod hinf;
mod norms;
mod spec;
pub(crate) mod tail;

pub use gram::{gram_h2, GramMatrix, ILL_CONDITIONED};
pub use hinf::hinf_norm_enclosure;
pub use norms::{x_norm_poly, y_norm_combo, PredualTable, HINF_RADIUS, K_MAX};
pub use spec::{Exponent, KernelCombo, SpaceSpec};
