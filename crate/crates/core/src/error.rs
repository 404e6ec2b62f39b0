use thiserror::Error;

use crate::graph::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid node {node}: graph has {n} nodes")]
    InvalidNode { node: NodeId, n: usize },

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("undefined: {0}")]
    Undefined(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A brute-force routine refused an input above its size guard.
    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("graph is not a DAG")]
    NotADag,

    #[error("source and sink are joined by a direct journey; no node separator exists")]
    Inseparable,

    #[error("simulation did not complete within {rounds} rounds")]
    Timeout { rounds: usize },

    #[error("adversary returned a disconnected topology in round {round}")]
    AdversaryViolation { round: usize },

    #[error("forwarder chose token {token} not known by node {node} in round {round}")]
    ForwarderViolation { round: usize, node: NodeId, token: usize },

    #[error("temporal graph age {age} is below the required {required}")]
    InfeasibleAge { age: u64, required: u64 },

    #[error("walk incomplete: {0}")]
    Incomplete(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
