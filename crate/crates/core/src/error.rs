use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed expansion literal {literal:?}: {reason}")]
    MalformedExpansion { literal: String, reason: &'static str },

    #[error("invalid binary digit {0}")]
    InvalidDigit(u8),

    #[error("dyadic numerator {k} out of range for depth {n}")]
    DyadicOutOfRange { k: u128, n: u32 },

    #[error("word {word} is not a balanced nonnegative breakpoint word")]
    NotBreakpoint { word: String },

    #[error("word {word} is not a small breakpoint word (must end in 0 followed by at least two 1s)")]
    NotSmallBreakpoint { word: String },

    #[error("interval endpoints out of order: {a} > {b}")]
    ReversedInterval { a: String, b: String },

    #[error("point {0} is not in the deficient digit set")]
    NotInOmega(String),

    #[error("point {point} is not in Gamma_{two_r}")]
    NotInGamma { point: String, two_r: usize },

    #[error("points must be distinct")]
    DegeneratePair,

    #[error("parameter out of range: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
