use thiserror::Error;

use crate::conditions::CheckKind;
use crate::rational::Rational;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A vector's length does not match the function dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A piece list of a polyhedral DC function was empty.
    #[error("piece list must not be empty")]
    EmptyPieceList,

    /// A function was declared with dimension zero.
    #[error("dimension must be positive")]
    ZeroDimension,

    /// A feasibility problem has inconsistent widths.
    #[error("malformed feasibility problem: {0}")]
    MalformedProblem(String),

    /// Separating-functional extraction was asked for a polytope
    /// that does intersect the ray.
    #[error("polytope meets the ray; no separating functional exists")]
    NotSeparable,

    /// Two provably equivalent formulations of the same condition returned
    /// different verdicts. This is an internal invariant violation and
    /// signals a bug in the feasibility kernel.
    #[error("route disagreement in {check}: the equivalent formulations returned different verdicts")]
    RouteDisagreement { check: CheckKind },

    /// A stationarity report was requested for a function whose
    /// normalization offset is nonzero.
    #[error("stationarity report requires offset 0, got {offset}")]
    NonzeroOffset { offset: Rational },

    /// The requested lattice exceeds the configured point budget.
    #[error("lattice of {points} points exceeds budget {budget}")]
    GridTooLarge { points: u128, budget: u64 },

    /// A grid specification violates its invariants.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A string does not parse as an exact rational.
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
}
