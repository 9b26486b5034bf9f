use thiserror::Error;

use crate::dist::Violation;

/// Errors raised by distribution construction, lattice computations and
/// divergence evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid subset mask {bits:#b} for k = {k}: {reason}")]
    InvalidSubset {
        bits: u64,
        k: usize,
        reason: &'static str,
    },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("expected {expected} draws, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("invalid population: {0}")]
    InvalidPopulation(String),

    #[error("invalid probability mass function: {}", format_violations(.0))]
    InvalidPmf(Vec<Violation>),

    #[error("reference probability is zero for symbol {symbol:?} (dimension {dimension}) while the distribution is positive there")]
    AbsoluteContinuityViolated { dimension: usize, symbol: String },

    #[error("reference probability is zero for symbol {symbol:?} (dimension {dimension}); references must be strictly positive")]
    ReferenceNotPositive { dimension: usize, symbol: String },

    #[error("probability vectors have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("k = {k} exceeds the supported maximum of {max} dimensions")]
    DimensionCap { k: usize, max: usize },

    #[error("malformed input: {0}")]
    Parse(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
