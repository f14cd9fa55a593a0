//! Error types for instance validation and algorithm execution.

use alloc::string::String;
use core::fmt;

use crate::graph::{EdgeId, NodeId};

/// Rejections raised while validating a raw edge list into a MAP instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    LoopEdge { node: NodeId },
    NodeOutOfRange { node: NodeId, n: u32 },
    BadCost { cost: u8 },
    ZeroEdgesNotMatching { node: NodeId },
    NotTwoEdgeConnected,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::LoopEdge { node } => write!(f, "loop edge at node {node}"),
            GraphError::NodeOutOfRange { node, n } => {
                write!(f, "node id {node} out of range (n = {n})")
            }
            GraphError::BadCost { cost } => write!(f, "edge cost {cost} not in {{0,1}}"),
            GraphError::ZeroEdgesNotMatching { node } => {
                write!(f, "zero-edges do not form a matching (node {node})")
            }
            GraphError::NotTwoEdgeConnected => write!(f, "graph is not 2-edge-connected"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GraphError {}

/// Hard failures inside the solver. These indicate either an input that
/// violates a stated precondition or a bug: the credit analysis proves the
/// listed situations impossible on well-structured instances, so we fail
/// loudly instead of papering over them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgoError {
    /// A prefix configuration the analysis rules out (unit-bridge followed
    /// by a zero-bridge with a black endpoint).
    ImpossibleCase { detail: String },
    /// The ledger would go negative paying for an augmentation.
    InsufficientCredits { needed: i64, available: i64, detail: String },
    /// A structural assumption failed (e.g. no reachable ear endpoint).
    Structure { detail: String },
    /// An operation was called on an instance that violates its
    /// precondition.
    Precondition { detail: String },
    /// A sold edge failed the two-edge-disjoint-paths legality check.
    IllegalSale { edge: EdgeId },
    /// A leaf solution failed its 2-ECSS feasibility check.
    InfeasibleSolution { detail: String },
}

impl fmt::Display for AlgoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgoError::ImpossibleCase { detail } => write!(f, "impossible case: {detail}"),
            AlgoError::InsufficientCredits {
                needed,
                available,
                detail,
            } => write!(
                f,
                "insufficient credits: need {needed} quarter-units, have {available} ({detail})"
            ),
            AlgoError::Structure { detail } => write!(f, "structural failure: {detail}"),
            AlgoError::Precondition { detail } => write!(f, "precondition violated: {detail}"),
            AlgoError::IllegalSale { edge } => {
                write!(f, "edge {edge} cannot be sold: removal breaks 2-edge-connectivity")
            }
            AlgoError::InfeasibleSolution { detail } => {
                write!(f, "solution infeasible: {detail}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AlgoError {}
