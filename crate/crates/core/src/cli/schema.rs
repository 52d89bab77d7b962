//! Problem-file schema, version 1.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{CMatrix, NormId};
use crate::matrix_bounds::CalculusSpec;
use crate::problem::InterpolationProblem;
use crate::rational_core::{KernelFamily, Node, Poly};
use crate::scalar::Cx;
use crate::spaces::{Exponent, SpaceSpec};

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceRecord>,
    #[serde(default)]
    pub nodes: Vec<NodeRecord>,
    #[serde(default)]
    pub options: OptionsRecord,
    /// Rows of `[re, im]` entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Pair>>>,
    /// Coefficients in ascending degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_polynomial: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calculus: Option<CalculusRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Wiener,
    Hardy2,
    Hinfinity,
    BeurlingSobolev,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QValue {
    Number(f64),
    /// `"inf"` or `"infinity"`.
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceRecord {
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<QValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub lambda: Pair,
    #[serde(default = "one")]
    pub multiplicity: usize,
    /// Values `f^{(j)}(lambda)` for `j = 0 .. multiplicity - 1`.
    #[serde(default)]
    pub targets: Vec<Pair>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalculusRecord {
    pub space: SpaceRecord,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormName {
    Spectral,
    Rowsum,
    Colsum,
}

impl From<NormName> for NormId {
    fn from(n: NormName) -> NormId {
        match n {
            NormName::Spectral => NormId::Spectral,
            NormName::Rowsum => NormId::RowSum,
            NormName::Colsum => NormId::ColSum,
        }
    }
}

fn cx(p: Pair) -> Cx<f64> {
    Cx::new(p[0], p[1])
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::from(Error::InvalidInput(msg.into()))
}

impl SpaceRecord {
    pub fn to_spec(&self) -> Result<SpaceSpec<f64>, CliError> {
        let fixed = |name: &str| -> Result<(), CliError> {
            if self.q.is_some() || self.beta.is_some() {
                return Err(invalid(format!("space {name} takes no q or beta")));
            }
            Ok(())
        };
        match self.family {
            FamilyName::Wiener => fixed("wiener").map(|_| SpaceSpec::wiener()),
            FamilyName::Hardy2 => fixed("hardy2").map(|_| SpaceSpec::hardy2()),
            FamilyName::Hinfinity => fixed("hinfinity").map(|_| SpaceSpec::hinfinity()),
            FamilyName::BeurlingSobolev => {
                let q = match &self.q {
                    Some(QValue::Number(q)) => Exponent::Finite(*q),
                    Some(QValue::Text(t)) if t == "inf" || t == "infinity" => Exponent::Infinite,
                    Some(QValue::Text(t)) => return Err(invalid(format!("unknown exponent {t:?}"))),
                    None => return Err(invalid("beurling_sobolev needs q")),
                };
                Ok(SpaceSpec::beurling_sobolev(q, self.beta.unwrap_or(0.0))?)
            }
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::parse(e.to_string()))?;
        if file.version != SCHEMA_VERSION {
            return Err(invalid(format!("unsupported schema version {}", file.version)));
        }
        Ok(file)
    }

    pub fn space(&self) -> Result<SpaceSpec<f64>, CliError> {
        self.space.as_ref().ok_or_else(|| invalid("missing space"))?.to_spec()
    }

    pub fn family(&self) -> Result<KernelFamily<f64>, CliError> {
        if self.nodes.is_empty() {
            return Err(invalid("no nodes"));
        }
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node::new(cx(n.lambda), n.multiplicity))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(KernelFamily::new(nodes)?)
    }

    pub fn targets(&self) -> Result<Vec<Cx<f64>>, CliError> {
        let mut out = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if n.targets.len() != n.multiplicity {
                return Err(invalid(format!(
                    "node {i} has multiplicity {} but {} targets",
                    n.multiplicity,
                    n.targets.len()
                )));
            }
            out.extend(n.targets.iter().map(|&p| cx(p)));
        }
        Ok(out)
    }

    pub fn problem(&self) -> Result<InterpolationProblem<f64>, CliError> {
        Ok(InterpolationProblem::new(self.space()?, self.family()?, self.targets()?)?)
    }

    pub fn matrix(&self) -> Result<Option<CMatrix<f64>>, CliError> {
        let Some(rows) = &self.matrix else { return Ok(None) };
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(invalid("matrix must be square and nonempty"));
        }
        Ok(Some(CMatrix::from_fn(n, n, |i, j| cx(rows[i][j]))))
    }

    pub fn minimal_polynomial(&self) -> Option<Poly<f64>> {
        self.minimal_polynomial
            .as_ref()
            .map(|c| Poly::new(c.iter().map(|&p| cx(p)).collect()))
    }

    /// Declared calculus, defaulting to the Wiener algebra with `c = 1`.
    pub fn calculus(&self) -> Result<CalculusSpec<f64>, CliError> {
        match &self.calculus {
            None => Ok(CalculusSpec::new(SpaceSpec::wiener(), 1.0)?),
            Some(c) => Ok(CalculusSpec::new(c.space.to_spec()?, c.c)?),
        }
    }
}
