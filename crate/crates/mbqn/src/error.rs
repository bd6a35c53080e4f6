use crate::graph::Node;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Node),
    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(Node),
    #[error("vertex set must not be empty")]
    EmptyVertexSet,
    #[error("edge {0}-{1} is not present")]
    MissingEdge(Node, Node),
    #[error("vertex {0} has already been measured")]
    AlreadyConsumed(Node),
    #[error("task endpoints must differ, got {0}->{0}")]
    DegenerateTask(Node),
    #[error("not a simple path in the graph: {0}")]
    NotAPath(String),
    #[error("{qubits} qubits exceed the supported maximum of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("vertex {vertex} lies outside the 1..={n} path range")]
    OutsideRange { vertex: Node, n: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
