use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state amplitudes have zero norm")]
    ZeroNorm,
    #[error("expected 6 amplitudes, got {0}")]
    BadLength(usize),
    #[error("matrix is not a physical density matrix: {0}")]
    NonPhysical(String),
    #[error("quadrature did not reach relative tolerance {rel_tol:e} (estimated error {abs_err:e} on {value:e})")]
    QuadratureFailure { value: f64, abs_err: f64, rel_tol: f64 },
    #[error("initial concurrence {0:e} is zero; persistence ratio undefined")]
    ZeroInitialEntanglement(f64),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed state file: {0}")]
    MalformedState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
