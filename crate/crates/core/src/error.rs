use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("body description: {0}")]
    Parse(String),

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point is interior to the body; no supporting hyperplane")]
    InteriorPoint,

    #[error("pivot lies on the boundary of the body")]
    BoundaryPivot,

    #[error("angle parameter {phi} outside the open domain ({lo}, {hi})")]
    OutOfDomain { phi: f64, lo: f64, hi: f64 },

    #[error("zero-length chord")]
    ZeroLengthChord,

    #[error("line is parallel to {0}")]
    Parallel(&'static str),

    #[error("body is unbounded")]
    Unbounded,

    #[error("polytope has {got} facets; face enumeration is capped at {cap}")]
    TooManyFacets { got: usize, cap: usize },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
