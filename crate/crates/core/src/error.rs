use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is not interior to the body (margin {margin:.3e})")]
    NotInterior { margin: f64 },
    #[error("degenerate chord: the two points coincide")]
    DegenerateChord,
    #[error("points are not collinear (residual {0:.3e})")]
    NotCollinear(f64),
    #[error("transform is singular (|det| = {0:.3e})")]
    SingularTransform(f64),
    #[error("chart covector does not stay positive on the closure (worst value {0:.3e})")]
    ChartViolation(f64),
    #[error("point lies outside the closure of the body (margin {0:.3e})")]
    OutsideClosure(f64),
    #[error("anchor is an extremal point; the face statement is vacuous")]
    ExtremalAnchor,
    #[error("radii must satisfy 0 < r < R (got r = {r}, R = {big_r})")]
    BadRadii { r: f64, big_r: f64 },
    #[error("word enumeration exceeded the budget of {0} nodes")]
    BudgetExceeded(usize),
    #[error("generators do not preserve the body (boundary defect {defect:.3e} > {tol:.3e})")]
    NotPreserving { defect: f64, tol: f64 },
    #[error("limit set approximation is empty")]
    EmptyLimitSet,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("triangle group is not of hyperbolic type (1/m12 + 1/m13 + 1/m23 = {0})")]
    NotHyperbolicType(f64),
    #[error("invalid step function: {0}")]
    BadSpec(String),
    #[error("point is not on the open vertical face")]
    OutsideFace,
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
