use thiserror::Error;

use crate::pareto_path::PartialLabel;

#[derive(Debug, Error)]
pub enum MistError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{element}: duplicate node id {id:?}")]
    DuplicateNode { element: String, id: String },
    #[error("{element}: duplicate function {function:?} (already on node {first:?})")]
    DuplicateFunction {
        element: String,
        function: String,
        first: String,
    },
    #[error("{element}: edge references unknown node {id:?}")]
    UnknownEdgeEndpoint { element: String, id: String },
    #[error("{element}: self-loop on node {id:?}")]
    SelfLoop { element: String, id: String },
    #[error("{element}: parallel edge {u:?}-{v:?}")]
    ParallelEdge { element: String, u: String, v: String },
    #[error("{element}: edge length {length} must be a finite non-negative number")]
    InvalidLength { element: String, length: f64 },

    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("node index {0} out of range")]
    NodeOutOfRange(usize),
    #[error("unknown function {0:?}")]
    UnknownFunction(String),
    #[error("multicast request must name at least one function")]
    EmptyRequest,

    #[error("invalid generator parameters: {0}")]
    InvalidGenerator(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{target:?} is unreachable from {source_node:?}")]
    Unreachable { source_node: String, target: String },
    #[error("exact label budget of {cap} exceeded")]
    ExactBudgetExceeded { cap: usize, best: Option<PartialLabel> },
    #[error("graph has {nodes} nodes, above the enumeration cap of {cap}")]
    NodeCapExceeded { nodes: usize, cap: usize },
    #[error("Pareto front is empty")]
    EmptyFront,

    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl MistError {
    /// Errors caused by the instance being infeasible rather than malformed.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, MistError::Unreachable { .. })
    }
}

pub type Result<T, E = MistError> = std::result::Result<T, E>;
