use thiserror::Error;

/// Errors raised by the exact-arithmetic and series machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("insufficient precision: need coefficient index {needed}, series known to {known}")]
    InsufficientPrecision { needed: i64, known: i64 },

    #[error("cell ({n},{l}) outside grid coverage n + 2l <= {bound}")]
    OutOfCoverage { n: u64, l: u64, bound: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
