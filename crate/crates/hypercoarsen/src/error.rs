//! Crate-wide error type.
//!
//! Variants are grouped by the exit-code class the CLI maps them to:
//! parameter/domain problems (exit 2), I/O and format problems (exit 3),
//! and self-check mismatches (exit 4).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed header: {0}")]
    Header(String),

    #[error("hyperedge {edge}: pin {pin} out of range 1..={n}")]
    PinOutOfRange { edge: usize, pin: usize, n: usize },

    #[error("hyperedge {edge}: duplicate pin {pin}")]
    DuplicatePin { edge: usize, pin: usize },

    #[error("hyperedge {edge} is empty")]
    EmptyHyperedge { edge: usize },

    #[error("hyperedge {edge}: weight {weight} must be positive")]
    NonPositiveEdgeWeight { edge: usize, weight: f64 },

    #[error("vertex {vertex}: weight {weight} must be nonnegative")]
    NegativeVertexWeight { vertex: usize, weight: f64 },

    #[error("malformed line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("invalid parameter {name}: {reason}")]
    Param { name: &'static str, reason: String },

    #[error("conductance undefined: {0}")]
    Degenerate(String),

    #[error("flow network capacity overflow (total finite capacity too large)")]
    CapacityOverflow,

    #[error("instance too large for exhaustive check: n={n} exceeds cap {cap}")]
    OracleTooLarge { n: usize, cap: usize },

    #[error("self-check mismatch: {0}")]
    OracleMismatch(String),
}

impl Error {
    /// Convenience constructor for parameter validation failures.
    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Param {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
