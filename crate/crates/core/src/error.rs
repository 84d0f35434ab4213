use thiserror::Error;

/// Errors raised by the engine. Every variant is a domain error except
/// [`Error::Overflow`] and [`Error::NotSupported`], which signal that a size
/// limit was hit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid fraction {a}/{n}: {reason}")]
    InvalidFraction { a: u64, n: u64, reason: &'static str },

    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: u64, hi: u64 },

    #[error("invalid weight function: {0}")]
    InvalidWeight(String),

    #[error("{a}/{n} is not in the {expected} half")]
    WrongHalf { a: u64, n: u64, expected: &'static str },

    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("partial quotient must be at least 1, got {0}")]
    BadDigit(u64),

    #[error("point set is empty")]
    EmptySet,

    #[error("bad range: {0}")]
    BadRange(String),

    #[error("bad step function: {0}")]
    BadSpec(String),

    #[error("invalid statistic: {0}")]
    InvalidSpec(String),

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("not supported: {0}")]
    NotSupported(String),
}

impl Error {
    /// True for size/limit failures as opposed to invalid input.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::Overflow(_) | Error::NotSupported(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
