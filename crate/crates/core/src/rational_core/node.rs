use crate::error::{Error, Result};
use crate::scalar::{cabs, lit, to_f64, Cx, Real};

use super::poly::Poly;

/// Nodes with `|lambda| >= 1 - BOUNDARY_EPS` are rejected.
pub const BOUNDARY_EPS: f64 = 1e-9;

pub(crate) fn check_inside<T: Real>(lambda: Cx<T>) -> Result<()> {
    let r = cabs(lambda);
    if !(r < T::one() - lit(BOUNDARY_EPS)) {
        return Err(Error::BoundaryNode { modulus: to_f64(r) });
    }
    Ok(())
}

/// Interpolation node in the open disk with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node<T: Real> {
    pub lambda: Cx<T>,
    pub multiplicity: usize,
}

impl<T: Real> Node<T> {
    pub fn new(lambda: Cx<T>, multiplicity: usize) -> Result<Self> {
        check_inside(lambda)?;
        if multiplicity == 0 {
            return Err(Error::InvalidInput("node multiplicity must be at least 1".into()));
        }
        Ok(Node { lambda, multiplicity })
    }

    pub fn simple(lambda: Cx<T>) -> Result<Self> {
        Node::new(lambda, 1)
    }
}

/// Distinct nodes spanning the model space of kernels and derivative kernels.
///
/// Flat indices follow the node order, and within a node the derivative
/// order: `(1,0), (1,1), ..., (2,0), ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFamily<T: Real> {
    nodes: Vec<Node<T>>,
    total_dim: usize,
}

impl<T: Real> KernelFamily<T> {
    pub fn new(nodes: Vec<Node<T>>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidInput("kernel family needs at least one node".into()));
        }
        for (i, a) in nodes.iter().enumerate() {
            check_inside(a.lambda)?;
            if a.multiplicity == 0 {
                return Err(Error::InvalidInput("node multiplicity must be at least 1".into()));
            }
            if nodes[..i].iter().any(|b| b.lambda == a.lambda) {
                return Err(Error::InvalidInput(format!(
                    "duplicate node at {}+{}i; use multiplicity instead",
                    to_f64(a.lambda.re),
                    to_f64(a.lambda.im)
                )));
            }
        }
        let total_dim = nodes.iter().map(|n| n.multiplicity).sum();
        Ok(KernelFamily { nodes, total_dim })
    }

    /// Family of simple nodes.
    pub fn simple(lambdas: &[Cx<T>]) -> Result<Self> {
        KernelFamily::new(lambdas.iter().map(|&l| Node::simple(l)).collect::<Result<_>>()?)
    }

    /// Groups a list of nodes with repetitions (e.g. the roots of a minimal
    /// polynomial) into distinct nodes with multiplicity, keeping first-seen order.
    pub fn from_expanded(lambdas: &[Cx<T>]) -> Result<Self> {
        let mut nodes: Vec<Node<T>> = Vec::new();
        for &l in lambdas {
            match nodes.iter_mut().find(|n| n.lambda == l) {
                Some(n) => n.multiplicity += 1,
                None => nodes.push(Node::simple(l)?),
            }
        }
        KernelFamily::new(nodes)
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn is_simple(&self) -> bool {
        self.nodes.iter().all(|n| n.multiplicity == 1)
    }

    /// Node values repeated according to multiplicity, in flat-index order.
    pub fn expanded(&self) -> Vec<Cx<T>> {
        self.nodes
            .iter()
            .flat_map(|n| std::iter::repeat(n.lambda).take(n.multiplicity))
            .collect()
    }

    /// `(lambda, derivative order)` for each flat index.
    pub fn index_pairs(&self) -> Vec<(Cx<T>, usize)> {
        self.nodes
            .iter()
            .flat_map(|n| (0..n.multiplicity).map(move |j| (n.lambda, j)))
            .collect()
    }

    pub fn max_modulus(&self) -> T {
        self.nodes.iter().fold(T::zero(), |a, n| a.max(cabs(n.lambda)))
    }

    pub fn max_multiplicity(&self) -> usize {
        self.nodes.iter().map(|n| n.multiplicity).max().unwrap_or(0)
    }

    /// Monic `prod (z - lambda_i)^{n_i}`; annihilates the compressed shift.
    pub fn minimal_polynomial(&self) -> Poly<T> {
        Poly::from_roots(&self.expanded())
    }
}
