use serde_json::{json, Value};
use thiserror::Error;

use crate::parser::ParseError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] cylfourier::Error),
    #[error("usage: {0}")]
    Usage(String),
    /// The exact decision and the floating-point oracle disagree.
    #[error("inconsistency: {0}")]
    Inconsistent(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
            CliError::Inconsistent(_) => "inconsistency",
            CliError::Core(e) => match e {
                cylfourier::Error::InvalidGrid(_) => "invalid-grid",
                cylfourier::Error::ShapeMismatch { .. } => "shape-mismatch",
                cylfourier::Error::NonFinite { .. } => "non-finite",
                cylfourier::Error::UnknownBuiltin(_) => "unknown-builtin",
                cylfourier::Error::UnknownStrategy { .. } => "unknown-strategy",
                cylfourier::Error::BadParameter(_) => "bad-parameter",
                cylfourier::Error::InvalidOperator(_) => "invalid-operator",
                cylfourier::Error::NotHypoelliptic { .. } => "not-sgh",
                cylfourier::Error::Inconsistency(_) => "inconsistency",
                cylfourier::Error::Precondition(_) => "precondition",
                cylfourier::Error::StaleWitness { .. } => "stale-witness",
                cylfourier::Error::KindMismatch { .. } => "kind-mismatch",
                cylfourier::Error::Format(_) => "format",
                cylfourier::Error::Io(_) => "io",
            },
        }
    }

    pub fn to_json(&self) -> Value {
        let mut e = json!({"kind": self.kind(), "message": self.to_string()});
        if let CliError::Parse(p) = self {
            e["offset"] = json!(p.offset);
            e["expected"] = json!(p.expected);
        }
        json!({ "error": e })
    }
}
