//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by group, canonical-form and spherical-function routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not skew-symmetric: asymmetry {asymmetry:e} exceeds tolerance {tol:e}")]
    NotSkew { asymmetry: f64, tol: f64 },

    #[error("matrix is not orthogonal: deviation {deviation:e} exceeds tolerance {tol:e}")]
    NotOrthogonal { deviation: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid spherical index: {0}")]
    InvalidIndex(String),

    #[error("accuracy budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
