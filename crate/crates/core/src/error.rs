use thiserror::Error;

/// Errors produced by the exact and numeric layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("polylogarithm evaluated at its pole w = 1")]
    PolylogPole,

    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("exponential requires a series without constant term")]
    NonzeroConstantTerm,

    #[error("logarithm requires a series with constant term 1")]
    ConstantTermNotOne,

    #[error("negative power t^{power} produced by k = {k}, v-degree {degree}")]
    NegativePower { k: usize, degree: usize, power: i64 },

    #[error("precision policy violated: need at least {required} digits, got {available}")]
    PrecisionPolicy { required: u32, available: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed exact value: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
