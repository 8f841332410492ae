use thiserror::Error;

/// Errors raised by the phase-space kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e}, tolerance {tolerance:.3e})")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("symplectic eigenvalue pairing failed (mismatch {mismatch:.3e}, tolerance {tolerance:.3e})")]
    NumericalPairing { mismatch: f64, tolerance: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("wavefunction has no nonzero sample")]
    EmptyWavefunction,
    #[error("grid error: {0}")]
    Grid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Wigner transform is not real (relative imaginary part {0:.3e})")]
    NonRealWigner(f64),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalPairing { .. } | Error::NonRealWigner(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
