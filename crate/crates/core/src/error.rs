use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite integrand value {value} at node {at}")]
    NonFiniteSample { at: String, value: String },

    #[error("matrix is not Hermitian: max |m - m^H| entry is {defect:e} (tolerance {tolerance:e})")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },

    #[error("operators carry different hbar values ({left} vs {right})")]
    HbarMismatch { left: String, right: String },

    #[error("phase is undefined at the phase-space origin")]
    UndefinedPhase,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid does not cover the integrand support: {0}")]
    Coverage(String),

    #[error("negative eigenvalue {value:e} below clamp threshold {threshold:e}")]
    NegativeEigenvalue { value: f64, threshold: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
