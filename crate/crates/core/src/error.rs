//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsing, validation and the classification pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file. The message carries the location (line/field)
    /// when one is available.
    #[error("parse error: {0}")]
    Parse(String),

    /// A label was declared more than once.
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    /// A label was referenced but never declared.
    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    /// Operation requires a multiplicity-free ring.
    #[error("ring is not multiplicity free: N({0}) = {1}")]
    NotMultiplicityFree(String, String),

    /// A solution's domain does not match the ring's F-symbol variable set.
    #[error("solution domain mismatch: {0}")]
    DomainMismatch(String),

    /// A solution's zero set does not match the zero set a basis was built
    /// for; the caller must recompute a basis for this solution.
    #[error("zero set mismatch: {0}")]
    ZeroSetMismatch(String),

    /// Gauge vectors must be nonzero on every fusion triple.
    #[error("gauge entry at {0} is zero")]
    ZeroGaugeEntry(String),

    /// The supplied permutation does not preserve the structure constants.
    #[error("not an automorphism of this ring: {0}")]
    NotAnAutomorphism(String),

    /// Vectors or matrices of incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Rejected run configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An internal invariant failed; indicates a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
