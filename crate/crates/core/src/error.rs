use crate::graph::VertexId;

/// Errors produced by topology construction, routing, scheduling and I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} is out of range for a graph with {1} vertices")]
    InvalidVertex(VertexId, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has {actual} vertices, over the exact-computation budget of {budget}")]
    OverBudget { actual: usize, budget: usize },

    #[error("{0}-{1} is not an edge of the topology")]
    NotAnEdge(VertexId, VertexId),

    #[error("vertices {0} and {1} have no common parent here")]
    NoCommonParent(VertexId, VertexId),

    #[error("vertex {0} is on the base layer and has no parents")]
    NoParents(VertexId),

    #[error("no entangled link available on edge {0}-{1}")]
    MissingLink(VertexId, VertexId),

    #[error("step rejected: {0}")]
    StepRejected(String),

    #[error("construction invariant violated: {0}")]
    Construction(String),

    #[error("label structure violated: {0}")]
    LabelStructure(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
