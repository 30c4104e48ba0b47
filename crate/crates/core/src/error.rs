//! Error types shared across the crate.

use thiserror::Error;

use crate::fock::ModeLabel;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation dimension {dim} is too small (need at least 2)")]
    InvalidDimension { dim: usize },

    #[error("mode {mode} is not present in this state")]
    UnknownMode { mode: ModeLabel },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter {name}={value}: expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("state is not normalized (trace {trace})")]
    NotNormalized { trace: f64 },

    #[error("covariance matrix is unphysical (det = {det}, needs det >= 1/4)")]
    UnphysicalCovariance { det: f64 },

    #[error("non-Gaussianity came out {delta:e} < -1e-8; state or truncation is inconsistent")]
    NegativeNonGaussianity { delta: f64 },

    #[error("truncation tail mass {mass:e} exceeds tolerance {tol:e}; increase dim")]
    TailMassExceeded { mass: f64, tol: f64 },

    #[error("multimode product dimension {required} exceeds the memory cap {cap}")]
    MemoryCapExceeded { required: usize, cap: usize },

    #[error("grid spec rejected: {reason}")]
    InvalidGrid { reason: String },

    #[error("dataset contains no samples")]
    EmptyDataset,

    #[error("ill-conditioned reconstruction: {detail}")]
    IllConditioned { detail: String },

    #[error("unsupported state file version {found:?} (expected {expected:?})")]
    FormatVersion { found: String, expected: &'static str },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
