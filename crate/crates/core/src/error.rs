use thiserror::Error;

use crate::scalar::ScalarMode;

/// Errors raised by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Indices (into the batch) of points that failed the smoothness policy.
    #[error("points are not parametrically smooth under the active policy: {0:?}")]
    NonSmoothPoints(Vec<usize>),

    #[error("no parametrically smooth point found ({0}); parameter is possibly non-ordinary")]
    NonOrdinarySuspected(String),

    #[error("cell structure changed under perturbation: {0}")]
    CombinatorialInstability(String),

    #[error("affine pieces have equal Jacobians; no wall is detectable")]
    NoDetectableWall,

    #[error("insufficient representatives: {0}")]
    InsufficientRepresentatives(String),

    #[error("invalid symmetry element: {0}")]
    InvalidSymmetry(String),

    #[error("scalar mode mismatch: expected {expected:?}, found {found:?}")]
    ModeMismatch { expected: ScalarMode, found: ScalarMode },

    #[error("dimension {value} exceeds the upper bound {bound} for architecture {arch}")]
    BoundViolation { value: usize, bound: usize, arch: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
