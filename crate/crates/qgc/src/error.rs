use thiserror::Error;

/// Error type shared across the toolkit.
#[derive(Debug, Error)]
pub enum QgcError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A structural assumption of the theory was violated (e.g. a claimed
    /// exact divisibility failed). Indicates a bug or an unsupported input
    /// family, never a rounding issue.
    #[error("structural assumption violated: {0}")]
    Structural(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, QgcError>;
