use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode index {index} out of range for {n_modes} modes")]
    IndexOutOfRange { index: usize, n_modes: usize },

    #[error("{name} = {value} outside [{min}, {max}]")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("number of modes {n} is not a power of two >= 2")]
    NotPowerOfTwo { n: usize },

    #[error("Hadamard matrix size {n} exceeds cap {cap}")]
    MatrixTooLarge { n: usize, cap: usize },

    #[error("quadrature did not converge: error estimate {achieved:e} > tolerance {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("prior not normalized: sums to {sum}")]
    PriorNotNormalized { sum: f64 },

    #[error("invalid message for {n_modes} modes: {context}")]
    InvalidMessage { n_modes: usize, context: String },
}

pub type Result<T> = std::result::Result<T, Error>;
