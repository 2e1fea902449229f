use thiserror::Error;

/// Errors raised by the arithmetic, measure and evaluation layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime {0}: must be an odd prime")]
    InvalidPrime(u64),

    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("division by zero")]
    DivisionByZero,

    /// The divisor (or another value that must be nonzero) is `O(p^m)` at its precision.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("zero input to {0}")]
    ZeroInput(&'static str),

    #[error("{0} requires a p-adic unit")]
    NotAUnit(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("character exponent {0} is trivial mod p-1; use unit_moment")]
    TrivialCharacter(i64),

    #[error("level {level} exceeds limit {limit}")]
    LevelTooDeep { level: u32, limit: u32 },

    #[error("unbounded measure: {0}")]
    UnboundedMeasure(String),

    #[error("integrand is not flagged C^1")]
    NotC1,

    #[error("not Volkenborn-summable in window: {0}")]
    NotSummable(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
