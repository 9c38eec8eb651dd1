//! Error type shared by every layer of the engine.
//!
//! Each variant carries a stable `kind` string (see [`Error::kind`]) so that
//! front ends can map failures to machine-readable codes without matching on
//! display text.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input text failed to parse. `line` and `col` are 1-based.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    /// A request violated a documented precondition (bad prime, rank
    /// mismatch, inconsistent dimensions, out-of-range index, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// An exponent or degree left the supported `u32` range.
    #[error("exponent overflow: {0}")]
    ExponentOverflow(String),

    /// A Groebner-basis run exceeded its S-pair budget.
    #[error("computation budget exceeded after {spairs} S-pairs (limit {limit})")]
    BudgetExceeded { spairs: u64, limit: u64 },

    /// An increasing chain hit its hard cap before the stop rule fired.
    #[error("chain '{chain}' did not stabilize within hard cap {hard_cap}")]
    Unstabilized { chain: String, hard_cap: usize },

    /// An internal consistency check failed; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable tag for this error.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Validation(_) => "validation",
            Error::ExponentOverflow(_) => "exponent_overflow",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Unstabilized { .. } => "unstabilized",
            Error::Internal(_) => "internal",
        }
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
