use thiserror::Error;

/// Errors raised by grid construction, distribution validation and the transforms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least {min}", min = crate::grid::PhaseGrid::MIN_POINTS)]
    InvalidGridSize(usize),
    #[error("objects live on different grids (N = {left} vs N = {right})")]
    GridMismatch { left: usize, right: usize },
    #[error("expected {expected} samples, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("support {0} does not fit the grid domain with the required margin")]
    SupportTooLarge(String),
    #[error("density has nonzero samples outside its support box")]
    DensityOutsideSupport,
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("derivative order {dx}+{dy} exceeds the supported maximum of {max}", max = crate::distribution::MAX_DERIVATIVE_ORDER)]
    OrderTooHigh { dx: u32, dy: u32 },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("Schatten exponent must satisfy p >= 1, got {0}")]
    InvalidExponent(f64),
    #[error("invalid distribution document: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
