use thiserror::Error;

/// Errors raised by the library.
///
/// Variants are split by what the caller did wrong: malformed inputs
/// (`InvalidSpectrum`, `InvalidState`, ...) versus requests that are well formed but
/// fall outside the numerical domain of an operation (`Domain`, `DimensionCap`).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid inverse temperature: {0}")]
    InvalidTemperature(String),

    #[error("spectrum mismatch: operands are defined on different spectra")]
    SpectrumMismatch,

    #[error("invalid thermal process matrix: {0}")]
    InvalidProcess(String),

    #[error("invalid engine configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension {dim} exceeds the enumeration cap {cap}; raise it with --max-dim or ERGOFLOW_MAX_DIM")]
    DimensionCap { dim: usize, cap: usize },

    #[error("expected a {expected}-level system, got {got} levels")]
    WrongDimension { expected: usize, got: usize },

    #[error("numerical domain error: {0}")]
    Domain(String),

    #[error("root finding did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
