use std::fmt;

use crate::error::{Error, Result};
use crate::rational_core::{kernel_coeff, KernelFamily};
use crate::scalar::{from_usize, lit, rpow, to_f64, Cx, Real};

/// Exponent in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Exponent<T> {
    /// Conjugate exponent: `1/p + 1/q = 1`.
    pub fn conjugate(self) -> Exponent<T> {
        match self {
            Exponent::Infinite => Exponent::Finite(T::one()),
            Exponent::Finite(q) if q == T::one() => Exponent::Infinite,
            Exponent::Finite(q) => Exponent::Finite(q / (q - T::one())),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::Finite(q) => to_f64(q),
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

/// Function space `X` on the disk together with its predual `Y`.
///
/// The Wiener algebra and `H^2` are stored as the weighted sequence spaces
/// `l^1_A(0)` and `l^2_A(0)`; use [`SpaceSpec::is_wiener`] and
/// [`SpaceSpec::is_hardy2`] to recognize them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceSpec<T> {
    /// `l^q_A(beta)`: Taylor coefficients weighted by `w_0 = 1, w_k = k^beta`.
    BeurlingSobolev { q: Exponent<T>, beta: T },
    HInfinity,
}

impl<T: Real> SpaceSpec<T> {
    pub fn beurling_sobolev(q: Exponent<T>, beta: T) -> Result<Self> {
        if let Exponent::Finite(q) = q {
            if !(q >= T::one()) || !q.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "exponent q = {} outside [1, inf]",
                    to_f64(q)
                )));
            }
        }
        if !beta.is_finite() {
            return Err(Error::InvalidInput("weight exponent must be finite".into()));
        }
        Ok(SpaceSpec::BeurlingSobolev { q, beta })
    }

    pub fn wiener() -> Self {
        SpaceSpec::BeurlingSobolev { q: Exponent::Finite(T::one()), beta: T::zero() }
    }

    pub fn hardy2() -> Self {
        SpaceSpec::BeurlingSobolev { q: Exponent::Finite(lit(2.0)), beta: T::zero() }
    }

    pub fn hinfinity() -> Self {
        SpaceSpec::HInfinity
    }

    pub fn is_wiener(&self) -> bool {
        *self == Self::wiener()
    }

    pub fn is_hardy2(&self) -> bool {
        *self == Self::hardy2()
    }

    pub fn is_hinfinity(&self) -> bool {
        matches!(self, SpaceSpec::HInfinity)
    }

    /// Exponent of the predual sequence norm; `None` for `H^infinity`.
    pub fn predual_exponent(&self) -> Option<Exponent<T>> {
        match *self {
            SpaceSpec::BeurlingSobolev { q, .. } => Some(q.conjugate()),
            SpaceSpec::HInfinity => None,
        }
    }

    pub fn beta(&self) -> T {
        match *self {
            SpaceSpec::BeurlingSobolev { beta, .. } => beta,
            SpaceSpec::HInfinity => T::zero(),
        }
    }

    /// `w_k` of the space itself.
    pub fn x_weight(&self, k: usize) -> T {
        coefficient_weight(k, self.beta())
    }

    /// Weight `k^{-beta}` of the predual.
    pub fn y_weight(&self, k: usize) -> T {
        coefficient_weight(k, -self.beta())
    }
}

impl<T: Real> fmt::Display for SpaceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            _ if self.is_wiener() => write!(f, "W"),
            _ if self.is_hardy2() => write!(f, "H2"),
            SpaceSpec::BeurlingSobolev { q, beta } => {
                write!(f, "l^{}_A({})", q.to_f64(), to_f64(beta))
            }
            SpaceSpec::HInfinity => write!(f, "Hinf"),
        }
    }
}

/// `1` at `k = 0`, `k^e` otherwise.
pub(crate) fn coefficient_weight<T: Real>(k: usize, e: T) -> T {
    if k == 0 {
        T::one()
    } else {
        rpow(from_usize::<T>(k), e)
    }
}

/// Linear combination `sum alpha_{i,j} k_{lambda_i, j}` of kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCombo<T: Real> {
    family: KernelFamily<T>,
    alpha: Vec<Cx<T>>,
}

impl<T: Real> KernelCombo<T> {
    pub fn new(family: KernelFamily<T>, alpha: Vec<Cx<T>>) -> Result<Self> {
        if alpha.len() != family.total_dim() {
            return Err(Error::InvalidInput(format!(
                "coefficient vector has length {}, family dimension is {}",
                alpha.len(),
                family.total_dim()
            )));
        }
        Ok(KernelCombo { family, alpha })
    }

    pub fn family(&self) -> &KernelFamily<T> {
        &self.family
    }

    pub fn alpha(&self) -> &[Cx<T>] {
        &self.alpha
    }

    /// Taylor coefficient of `z^k`.
    pub fn coeff(&self, k: usize) -> Cx<T> {
        self.family
            .index_pairs()
            .iter()
            .zip(&self.alpha)
            .fold(Cx::new(T::zero(), T::zero()), |acc, (&(l, j), &a)| {
                acc + a * kernel_coeff(l, j, k)
            })
    }
}
