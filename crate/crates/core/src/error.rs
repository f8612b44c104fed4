use thiserror::Error;

use crate::rational::{fmt_rational, Exponent};

/// Errors raised by the algebraic layer (segments, unitary factors, decision procedures).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown cuspidal symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid endpoints {}..{}: the difference must be a non-negative integer", fmt_rational(.low), fmt_rational(.high))]
    InvalidEndpoints { low: Exponent, high: Exponent },
    #[error("operation undefined on the trivial segment of length 0")]
    EmptySegment,
    #[error("segment of length {length} with center {} is not unitary (needs center 0 and length >= 1)", fmt_rational(.center))]
    NonUnitarySegment { length: u32, center: Exponent },
    #[error("multiplier k = {k} is out of range (must be >= {min})")]
    BadMultiplier { k: i64, min: i64 },
    #[error("complementary exponent {} must lie strictly between 0 and 1/2", fmt_rational(.0))]
    AlphaOutOfRange(Exponent),
    #[error("representation is not generic: factor `{0}` has k >= 2")]
    NotGeneric(String),
    #[error("`{0}` is not sigma-self-dual")]
    NotSelfDual(String),
    #[error("exponent arithmetic overflowed")]
    Overflow,
    #[error("type error: {0}")]
    TypeError(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
