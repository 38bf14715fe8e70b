//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Syntax error in a textual polynomial or scalar expression.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Operands live in incompatible variable spaces.
    #[error("variable mismatch: {0}")]
    VarMismatch(String),

    /// Input is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A rule-backed operator was queried beyond its declared degree bound.
    #[error("operator queried at degree {requested}, beyond its bound {bound}")]
    DegreeBound { bound: u32, requested: u32 },

    /// Malformed JSON input.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// JSON was well-formed but described an invalid object.
    #[error("invalid data: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
