//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the exact-arithmetic and algebra layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands or inputs live in different rings.
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    /// Division by an exact zero.
    #[error("division by zero")]
    DivisionByZero,
    /// An exact division was requested but the quotient does not exist in the ring.
    #[error("not divisible: {0}")]
    NotDivisible(String),
    /// A ring or algebra construction violated a precondition.
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    /// The operation is outside the supported scope.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A map does not respect the relations of its source.
    #[error("relation violated: {0}")]
    RelationViolated(String),
    /// A computation would exceed a configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// An algebraic precondition (domain, field, invertibility, ...) does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
