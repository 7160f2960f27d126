use std::fmt;

use thiserror::Error;

/// Position-tagged diagnostic produced by the text parsers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("width mismatch: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("dimension {0} is outside the supported range 1..=16")]
    UnsupportedDimension(usize),

    #[error("input and output dimensions differ (n={n}, m={m})")]
    NotSquare { n: usize, m: usize },

    #[error("value {value:#x} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: usize },

    #[error("modulus {0:#x} is not an irreducible polynomial of the requested degree")]
    InvalidModulus(u32),

    #[error("exponent {exponent} out of range for a field of size 2^{n}")]
    ExponentOutOfRange { exponent: u64, n: usize },

    #[error("function has algebraic degree {0}, expected at most 2")]
    NotQuadratic(u32),

    #[error("function is not APN")]
    NotApn,

    #[error("table of {entries} entries is too large for a dense {what}")]
    TooLarge { what: &'static str, entries: u64 },

    #[error("invalid trim descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("{0}")]
    Usage(String),

    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    /// A mathematical invariant that must hold did not. Signals a bug or a
    /// malformed input that slipped past validation.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
