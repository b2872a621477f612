use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite evaluation at t = {t}")]
    NonFinite { t: f64 },

    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("rank deficiency at input vector {index} (pivot norm {norm:e})")]
    RankDeficient { index: usize, norm: f64 },

    #[error("tangent vector is not based at the requested point")]
    BaseMismatch,

    #[error("point is off the unit sphere (|p| - 1 = {0:e})")]
    OffSphere(f64),

    #[error("vector is not tangent at its base point (defect {0:e})")]
    NotTangent(f64),

    #[error("quaternionic dimension must be at least 1")]
    InvalidDimension,

    #[error("degenerate plane (denominator {0:e})")]
    DegeneratePlane(f64),

    #[error("field `{0}` has no analytic derivative rule")]
    NoAnalyticDerivative(String),

    #[error("chart coordinates out of domain: {0}")]
    ChartDomain(String),

    #[error("chart Jacobian is degenerate (rank {rank} < {expected})")]
    ChartDegenerate { rank: usize, expected: usize },

    #[error("transverse metric is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),
}
