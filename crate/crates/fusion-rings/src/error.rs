use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum FusionError {
    /// Structural problem with input data (wrong lengths, out-of-range
    /// indices, non-bijective dual map). Distinct from axiom violations,
    /// which are reported through [`crate::ring::ValidationReport`].
    #[error("shape error: {0}")]
    Shape(String),

    /// An argument was outside the documented domain of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Operation requires a commutative fusion ring.
    #[error("fusion ring is not commutative")]
    NonCommutative,

    /// A matrix that must be invertible at working precision was singular.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// An iterative numeric routine exhausted its retry budget.
    #[error("retry budget exhausted: {0}")]
    RetryExhausted(String),

    /// Group-theoretic input is not a group / subgroup as required.
    #[error("group axiom failure: {0}")]
    Group(String),

    /// An extension specification violates its compatibility conditions.
    #[error("extension spec rejected: {0}")]
    ExtensionSpec(String),

    /// No assignment satisfied a search (e.g. no valid S-matrix row pairing).
    #[error("search failed: {0}")]
    SearchFailed(String),
}

pub type Result<T> = std::result::Result<T, FusionError>;
