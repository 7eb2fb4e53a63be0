use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("fanout bound must be at least 2, got {0}")]
    InvalidFanout(u32),

    #[error("depth must be at least 1, got {0}")]
    InvalidDepth(u32),

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("capacity exceeded: {what} (max inputs for k={k}, depth={depth} is {max})")]
    Capacity {
        what: String,
        k: u32,
        depth: u32,
        max: String,
    },

    #[error("malformed circuit at node {node}: {reason}")]
    MalformedCircuit { node: usize, reason: String },

    #[error("circuit validation failed: {0}")]
    Validation(String),

    #[error("json parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
