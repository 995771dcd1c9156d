//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("valuation undetermined at truncation order {truncation}")]
    UndeterminedValuation { truncation: i64 },

    #[error("variable count mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("polynomial must be homogeneous for this operation")]
    NotHomogeneous,

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },

    #[error("series truncation {have} insufficient, need at least {need}")]
    InsufficientTruncation { have: i64, need: i64 },

    #[error("input size exceeds supported limits: {0}")]
    SizeLimit(String),

    #[error("quadrature failed to converge: achieved error estimate {achieved:e}")]
    QuadratureNonConvergence { achieved: f64 },

    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("lattice rank {rank} exceeds enumeration cap {cap}")]
    EnumerationCap { rank: usize, cap: usize },

    #[error("zero of the section lies on the integration circle (perturb r)")]
    ZeroOnCircle,

    #[error("root finding failed to certify residuals below {residual:e}")]
    RootCertification { residual: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}
