use thiserror::Error;

/// Structural errors raised by the optimizer library.
///
/// Stochastic search never fails at runtime once its inputs are valid, so
/// every variant here describes a malformed input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable {index} = {value} lies outside [{lo}, {hi}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid bounds for variable {index}: lo {lo} > hi {hi}")]
    InvalidBounds { index: usize, lo: f64, hi: f64 },

    #[error("{0} requires a non-empty input")]
    EmptyInput(&'static str),

    #[error("{what} requires at least {min} points, got {found}")]
    TooFewPoints {
        what: &'static str,
        min: usize,
        found: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("squashing input must be non-negative, got {0}")]
    NegativeSquashInput(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
