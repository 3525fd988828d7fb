//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Evaluation requested at a pole.
    #[error("pole of {func} at {at}")]
    Pole { func: &'static str, at: f64 },

    /// A Green-function kernel was evaluated on its divisor (R = 0).
    #[error("singular kernel: point lies on the cycle of {what}")]
    Singular { what: String },

    /// Requested accuracy not reached (tail bound exceeds tolerance).
    #[error("accuracy failure in {op}: {msg}")]
    Accuracy { op: &'static str, msg: String },

    /// Invalid run configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }
}
