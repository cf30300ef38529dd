//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by operator construction, quadrature and experiment drivers.
#[derive(Debug, Error)]
pub enum WickError {
    /// Two objects built over different truncations were combined.
    #[error("truncation parameters mismatch: ({n_left}, {deg_left}) vs ({n_right}, {deg_right})")]
    ParamsMismatch {
        n_left: usize,
        deg_left: u32,
        n_right: usize,
        deg_right: u32,
    },

    /// A matrix or coefficient block had the wrong dimension.
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: String,
    },

    /// Successive quadrature refinements failed to agree within tolerance.
    #[error("quadrature did not converge: {context} (last disagreement {disagreement:.3e}, tolerance {tolerance:.3e})")]
    QuadratureNonconvergence {
        context: String,
        disagreement: f64,
        tolerance: f64,
    },

    /// A dense construction would exceed the configured basis-size guard.
    #[error("basis size {size} exceeds the dense-solve guard {limit} (set WICKLAB_MAX_BASIS to override)")]
    ResourceLimit { size: usize, limit: usize },

    /// An annihilation/creation order larger than the truncation degree.
    #[error("ladder order {order} exceeds truncation degree {degree_max}")]
    OrderExceedsTruncation { order: u32, degree_max: u32 },

    /// Symbol text that does not parse.
    #[error("symbol parse error: {0}")]
    SymbolParse(String),

    /// Invalid experiment or CLI configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// I/O wrapper for the CLI layer.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, WickError>;
