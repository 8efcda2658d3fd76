//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input violates a structural precondition (dimension mismatch, broken invariant).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A map that requires an injective argument received one with a kernel.
    #[error("matrix is not injective: {0}")]
    NotInjective(String),

    /// An eigenvalue fell outside the declared domain of a scalar function.
    #[error("spectrum outside function domain: {0}")]
    DomainError(String),

    /// The eigenvalue gap needed for a P_k-based construction is absent.
    #[error("degenerate eigenvalue configuration: {0}")]
    DegenerateAlpha(String),

    /// A map presented as facial produced a non-facial image.
    #[error("facial structure violated: {0}")]
    FacialViolation(String),

    /// The point lies outside the coordinate chart of a local inverse.
    #[error("outside chart: {0}")]
    OutsideChart(String),

    /// A ring element that must be a unit is not invertible.
    #[error("not invertible: {0}")]
    NotInvertible(String),

    /// A desk-scale bound on exhaustive computation was exceeded.
    #[error("problem too large: {0}")]
    TooLarge(String),

    /// Winding accumulation did not settle near an integer.
    #[error("degree sampling did not resolve: {0}")]
    ResolutionError(String),

    /// Bad command-line or suite usage.
    #[error("usage error: {0}")]
    UsageError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
