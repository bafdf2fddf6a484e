use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum HeunError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// `gamma + delta` is a nonpositive integer, so two of the `D_m` coincide.
    #[error("degenerate specification: gamma + delta = {0} is a nonpositive integer")]
    Degenerate(String),

    /// An exact computation was requested but some input is not Gaussian-rational.
    #[error("exact arithmetic requires Gaussian-rational inputs ({0})")]
    NotExact(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = HeunError> = std::result::Result<T, E>;
