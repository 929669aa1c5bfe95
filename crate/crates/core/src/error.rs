use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at {location}: {what}")]
    Pole { what: String, location: f64 },

    #[error("root structure: {0}")]
    RootStructure(String),

    #[error("metric is singular at {0:?}")]
    SingularMetric([f64; 4]),

    #[error("finite-difference stencil leaves the validity domain at {0:?}")]
    StencilOutsideDomain([f64; 4]),

    #[error("point {0:?} lies outside the validity domain")]
    OutsideDomain([f64; 4]),

    #[error("tetrad is not orthonormal (residual {0:.3e})")]
    NonOrthonormalTetrad(f64),

    #[error("null tetrad conditions violated (residual {0:.3e})")]
    NonNullTetrad(f64),

    #[error("signature mismatch: {0}")]
    Signature(String),

    #[error("classically forbidden region at {location} (value {value:.3e})")]
    ForbiddenRegion { location: f64, value: f64 },

    #[error("jacobian rank deficient (smallest singular value {0:.3e})")]
    RankDeficient(f64),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
