use thiserror::Error;

/// Which density-operator invariant a candidate matrix violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityViolation {
    NonHermitian,
    Trace,
    NegativeEigenvalue,
}

impl std::fmt::Display for DensityViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DensityViolation::NonHermitian => "non-Hermitian",
            DensityViolation::Trace => "trace",
            DensityViolation::NegativeEigenvalue => "negative eigenvalue",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (anti-Hermitian residual {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("invalid density operator: {violation} ({detail})")]
    InvalidDensity {
        violation: DensityViolation,
        detail: String,
    },

    #[error("negative eigenvalue {value:.3e} in a positive semidefinite argument")]
    NegativeEigenvalue { value: f64 },

    #[error("numerical consistency failure in {context}: residual {residual:.3e}")]
    NumericalConsistency { context: &'static str, residual: f64 },

    #[error("entropy rate undefined: incoherent generator populates the kernel of the reduced state")]
    RateUndefined,

    #[error("state drifted by {drift:.3e} at t = {t}; refine the time grid")]
    StepSize { t: f64, drift: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
