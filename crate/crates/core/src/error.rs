//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by matrix construction, file I/O, and the solver stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, got {actual})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("matrix must be square for {0}")]
    NotSquare(&'static str),

    #[error("invalid sparse structure: {0}")]
    InvalidStructure(String),

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("local domain is empty")]
    EmptyDomain,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero diagonal entry in row {row} (1-based {})", row + 1)]
    ZeroDiagonal { row: usize },

    #[error("non-finite arithmetic encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("non-positive temperature {value} at node {index} (1-based {})", index + 1)]
    NonPositiveTemperature { index: usize, value: f64 },

    #[error("Picard iteration did not converge within {iterations} iterations at step {step} (last update norm {last_delta})")]
    PicardStalled {
        step: usize,
        iterations: usize,
        last_delta: f64,
    },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
