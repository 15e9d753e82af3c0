use thiserror::Error;

use crate::symbol::Witness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("unknown builtin function `{0}`")]
    UnknownBuiltin(String),

    #[error("unknown {registry} `{name}`")]
    UnknownStrategy { registry: &'static str, name: String },

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("operator is not Schwartz globally hypoelliptic (symbol vanishes at k = {}, xi in [{}, {}])", .witness.k, .witness.xi_lo, .witness.xi_hi)]
    NotHypoelliptic { witness: Box<Witness> },

    /// A decision and a numeric check disagree. Always a bug.
    #[error("inconsistency: {0}")]
    Inconsistency(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("stale witness: recorded for `{recorded}`, checked against `{given}`")]
    StaleWitness { recorded: String, given: String },

    #[error("data kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: &'static str, found: &'static str },

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
