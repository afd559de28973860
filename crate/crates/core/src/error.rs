use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not skew-symmetric (entry ({i},{j}) violates M[i][j] = -M[j][i])")]
    NotSkew { i: usize, j: usize },

    #[error("{op} is only defined for n = {required}, got n = {found}")]
    UnsupportedDimension {
        op: &'static str,
        required: usize,
        found: usize,
    },

    #[error("non-finite value encountered")]
    NonFinite,

    #[error("empty vector")]
    Empty,

    #[error("singular magnitude: |v| = {magnitude:e} is not above the guard {threshold:e}")]
    SingularMagnitude { magnitude: f64, threshold: f64 },

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid sample grid: {0}")]
    InvalidGrid(String),

    #[error("invalid signal spec: {0}")]
    InvalidSpec(String),

    #[error("invalid reference frame: {0}")]
    InvalidFrame(String),

    #[error("stream-line integration failed at step {step}: {reason}")]
    Integration { step: usize, reason: String },
}
