use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum GdlError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid point set: {0}")]
    PointSet(String),

    #[error("deformation is not injective on the set: {0}")]
    Collision(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GdlError>;
