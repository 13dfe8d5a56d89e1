use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("sample count {n} must be a power of two and at least {min}")]
    InvalidSampleCount { n: usize, min: usize },

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("mode cutoff {cutoff} must be below n/2 = {half}")]
    CutoffTooLarge { cutoff: usize, half: usize },

    #[error("input has nonzero mean {mean:e}; a periodic primitive does not exist")]
    NonZeroMean { mean: f64 },

    #[error("grid mismatch: expected {expected} samples, found {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("diffeomorphism is not orientation preserving at gridpoint {index}: F' = {derivative:e}")]
    NotMonotone { index: usize, derivative: f64 },

    #[error("inverse did not converge at gridpoint {index} after {iterations} iterations")]
    InverseDiverged { index: usize, iterations: usize },

    #[error("{quantity} must be positive; first failure at gridpoint {index} (value {value:e})")]
    NotPositive { quantity: &'static str, index: usize, value: f64 },

    #[error("gauge map has det = {det} at gridpoint {index}")]
    NotUnimodular { index: usize, det: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("coframe is not oriented at row {row}, column {col}: alpha1 ^ alpha2 = {value:e}")]
    Orientation { row: usize, col: usize, value: f64 },

    #[error("boundary extrapolation of {quantity} did not converge (successive estimates differ by {gap:e})")]
    Resolution { quantity: &'static str, gap: f64 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },
}
