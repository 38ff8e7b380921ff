use thiserror::Error;

/// Errors raised by the geometric and numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate facet: |det X| = {det:e} below tolerance {tol:e}")]
    DegenerateFacet { det: f64, tol: f64 },
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("need at least {needed} points in dimension {dim}, got {got}")]
    TooFewPoints { needed: usize, got: usize, dim: usize },
    #[error("input points span an affine space of rank {rank} < {dim}")]
    DegenerateInput { rank: usize, dim: usize },
    #[error("hull construction failed numerically: {0}")]
    NumericalFailure(String),
    #[error("origin is not strictly interior (min facet offset {min_offset:e})")]
    OriginNotInterior { min_offset: f64 },
    #[error("candidate pool of {pool} points is too small for {n} net points (need >= {needed})")]
    PoolTooSmall { pool: usize, n: usize, needed: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("malformed polytope document: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
