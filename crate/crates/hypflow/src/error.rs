//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("state {state} has two outgoing edges labeled {label}")]
    NondeterministicLabel { state: u32, label: String },

    #[error("state {0} is not reachable from the initial state")]
    UnreachableState(u32),

    #[error("unsupported presentation family: {0}")]
    UnsupportedPresentation(String),

    #[error("radius {requested} exceeds the enumeration safety cap {cap}")]
    RadiusTooLarge { requested: u32, cap: u32 },

    #[error("matrix is not irreducible")]
    NotIrreducible,

    #[error("eigensolver did not converge within {budget} iterations (residual {residual:.3e})")]
    NoConvergence { budget: u64, residual: f64 },

    #[error("graph has no cycles; growth is not defined")]
    NoCycles,

    #[error("no weight defined for admissible block {0}")]
    MissingBlockWeight(String),

    #[error("free-product order {0} must be at least 2")]
    InvalidOrder(u32),

    #[error("pressure is not monotone on the bracket; root finding failed: {0}")]
    NoBracketing(String),

    #[error("Legendre supremum attained on the grid boundary at s = {0}")]
    SupremumOnBoundary(f64),

    #[error("not enough usable bins for a slope fit (got {0}, need {1})")]
    InsufficientRange(usize, usize),

    #[error("degenerate projective interval: {0}")]
    DegenerateInterval(String),

    #[error("block recoding needs {needed} states, above the guard of {guard}")]
    RecodingTooLarge { needed: u64, guard: u64 },

    #[error("cone-type construction at k = {k} failed validation: {reason}")]
    ConeTypeUnsound { k: u32, reason: String },

    #[error("{0}")]
    InvalidData(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
