use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty data set")]
    EmptyData,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("configuration is for n = {expected} observations but {found} were given")]
    SampleSizeMismatch { expected: usize, found: usize },

    #[error("vector norm {norm} is not within 1e-6 of 1")]
    NotUnitNorm { norm: f64 },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("frame columns are not orthonormal (defect {defect:e})")]
    NotOrthonormal { defect: f64 },

    #[error("frame columns are linearly dependent")]
    DependentFrame,

    #[error("invalid subspace dimension m = {m} for ambient dimension {ambient}")]
    InvalidSubspaceDimension { m: usize, ambient: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid confidence level alpha = {0}; must lie in (0, 1)")]
    InvalidAlpha(f64),

    #[error("sample size must be at least 1")]
    InvalidSampleSize,

    #[error("point norm {norm} exceeds 1")]
    NormExceedsOne { norm: f64 },

    #[error("Jacobi iteration did not converge; off-diagonal residual {residual:e}")]
    EigenNoConvergence { residual: f64 },

    #[error("eigengap {gap} is below sqrt(2)*eps = {required}; projected ball bound does not apply")]
    GapConditionViolated { gap: f64, required: f64 },

    #[error("eps must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("Euclidean mean is zero; the asymptotic region is undefined")]
    ZeroMean,

    #[error("point lies on the hyperplane at infinity (last coordinate {last:e})")]
    PointAtInfinity { last: f64 },

    #[error("radius {0} must lie in (0, sqrt(2)]")]
    InvalidDelta(f64),

    #[error("operation requires dimension {expected}, got {found}")]
    UnsupportedDimension { expected: usize, found: usize },

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
}

pub type Result<T> = std::result::Result<T, Error>;
