use thiserror::Error;

use crate::graph::{EdgeId, Vertex};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },

    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),

    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is not biconnected")]
    NotBiconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The instance is larger than the configured exact-search budget. Exact
    /// routines raise this instead of returning a possibly wrong answer.
    #[error("instance exceeds exact-search budget: {0}")]
    Scale(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("vertex set does not hit every theta_{r} model")]
    NotHitting { r: usize },
}
