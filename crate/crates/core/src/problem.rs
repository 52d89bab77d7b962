use crate::error::{Error, Result};
use crate::rational_core::{KernelFamily, Poly};
use crate::scalar::{cabs, Cx, Real};
use crate::spaces::SpaceSpec;

/// Minimal-norm interpolation data: find `f` in the space with
/// `f^{(j)}(lambda_i) = targets[(i, j)]` of least norm.
///
/// Targets are derivatives (not Taylor coefficients), in the family's flat
/// index order.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationProblem<T: Real> {
    pub space: SpaceSpec<T>,
    pub family: KernelFamily<T>,
    pub targets: Vec<Cx<T>>,
}

impl<T: Real> InterpolationProblem<T> {
    pub fn new(space: SpaceSpec<T>, family: KernelFamily<T>, targets: Vec<Cx<T>>) -> Result<Self> {
        if targets.len() != family.total_dim() {
            return Err(Error::InvalidInput(format!(
                "{} targets for {} interpolation conditions",
                targets.len(),
                family.total_dim()
            )));
        }
        if targets.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite target".into()));
        }
        Ok(InterpolationProblem { space, family, targets })
    }

    pub fn with_space(&self, space: SpaceSpec<T>) -> Self {
        InterpolationProblem { space, ..self.clone() }
    }

    /// The problem with targets `c * w`.
    pub fn scaled(&self, c: Cx<T>) -> Self {
        InterpolationProblem {
            targets: self.targets.iter().map(|&w| w * c).collect(),
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.targets.iter().all(|w| cabs(*w) == T::zero())
    }

    /// `sum_{i,j} alpha_{i,j} conj(w_i^{(j)})`: the functional fixed by the data.
    pub fn pairing(&self, alpha: &[Cx<T>]) -> Cx<T> {
        alpha
            .iter()
            .zip(&self.targets)
            .fold(Cx::new(T::zero(), T::zero()), |acc, (&a, &w)| acc + a * w.conj())
    }

    /// Largest deviation `|f^{(j)}(lambda_i) - w_i^{(j)}|`.
    pub fn residual(&self, f: &Poly<T>) -> T {
        self.family
            .index_pairs()
            .iter()
            .zip(&self.targets)
            .fold(T::zero(), |m, (&(l, j), &w)| m.max(cabs(f.eval_derivative(j, l) - w)))
    }
}
