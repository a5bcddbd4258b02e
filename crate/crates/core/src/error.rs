use thiserror::Error;

/// Errors produced by the toolkit's core operations.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("range violation: {0}")]
    RangeViolation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cone appears empty: {0}")]
    EmptyCone(String),

    #[error("point outside the cone")]
    OutsideCone,

    #[error("weight is not positive or not differentiable at the point")]
    NondifferentiablePoint,

    #[error("nonintegrable: {0}")]
    Nonintegrable(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("assumption violation: {0}")]
    AssumptionViolation(String),

    #[error("branch mismatch: {0}")]
    BranchMismatch(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("weights are not equal up to the required structure")]
    NotEqualWeights,

    #[error("gamma dependence: {0}")]
    GammaDependence(String),

    #[error("empty parts list")]
    EmptyParts,

    #[error("gradient norm vanishes on the grid")]
    ZeroGradient,

    #[error("bump of radius 1 at delta={0} is not contained in the cone")]
    BumpExitsCone(f64),

    #[error("resolution insufficient: {0}")]
    ResolutionInsufficient(String),

    #[error("instance size {got} exceeds the supported maximum {max}")]
    SizeExceeded { got: usize, max: usize },

    #[error("binning mismatch: {0}")]
    BinningMismatch(String),

    #[error("transport map leaves the cone at a sampled point")]
    MapLeavesCone,

    #[error("normalization failure: {0}")]
    NormalizationFailure(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
