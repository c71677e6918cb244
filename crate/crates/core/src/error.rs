use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{family}({n}) requires n >= {min}")]
    ParameterBelowMinimum {
        family: &'static str,
        n: usize,
        min: usize,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("instance too large: {what} is {actual}, cap is {cap}")]
    InstanceTooLarge {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("graph is disconnected; non-split domination is defined for connected graphs")]
    Disconnected,

    #[error("illegal move {from}->{to}: {reason}")]
    IllegalMove {
        from: usize,
        to: usize,
        reason: &'static str,
    },

    #[error("configuration has {actual} entries, graph has {expected} vertices")]
    ConfigurationLength { expected: usize, actual: usize },

    #[error("exactness failure: {0}")]
    Exactness(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
