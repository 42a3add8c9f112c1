use thiserror::Error;

/// Errors raised by the toolkit. Every variant names the contract that was
/// violated so the CLI can print it verbatim.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid density matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("scale error: {0}")]
    Scale(String),

    #[error("zero-probability event: {0}")]
    ZeroProbability(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
