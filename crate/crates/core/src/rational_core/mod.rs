//! Polynomials, rational functions, Blaschke products, Cauchy kernels and
//! their Taylor coefficient streams.

mod basis;
mod node;
mod poly;
mod rational;
mod stream;

pub use basis::{blaschke_factor, blaschke_product, kernel_coeff, malmquist_walsh};
pub use node::{KernelFamily, Node, BOUNDARY_EPS};
pub use poly::{cluster_roots, default_cluster_tol, Poly};
pub use rational::{RationalFn, REDUCE_TOL};
pub use stream::{taylor_stream, CoeffStream, TailCertificate, POLE_EPS, VALIDATION_BAND};
