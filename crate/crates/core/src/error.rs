use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    /// Malformed tables, out-of-range indices, inconsistent dimensions.
    #[error("structural error: {0}")]
    Structural(String),
    /// Objects living over different algebras or in different hom categories.
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, DgError>;

pub(crate) fn structural(msg: impl Into<String>) -> DgError {
    DgError::Structural(msg.into())
}

pub(crate) fn mismatch(msg: impl Into<String>) -> DgError {
    DgError::Mismatch(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> DgError {
    DgError::Precondition(msg.into())
}
