use thiserror::Error;

use crate::graph::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge id {edge} out of range for a graph with {edge_count} edges")]
    InvalidEdgeId { edge: usize, edge_count: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(#[from] Violation),

    #[error("matching is not a perfect matching of the host graph")]
    NotPerfect,

    #[error("graph is not bipartite; use the brute-force engine instead")]
    NotBipartite,

    #[error("bipartition is not balanced: {left} left vs {right} right vertices")]
    UnbalancedBipartition { left: usize, right: usize },

    #[error("weight assignment covers {got} edges, graph has {expected}")]
    WeightCountMismatch { got: usize, expected: usize },

    #[error("enumeration budget exhausted before the search completed")]
    BudgetExhausted,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matching is inconsistent with the gadget: {0}")]
    GadgetMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
