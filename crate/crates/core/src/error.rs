use thiserror::Error;

/// Errors raised by the geometric and linear-algebra routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular (|det| = {det:e} below threshold {threshold:e})")]
    Singular { det: f64, threshold: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not Gauss-factorizable: pivot {pivot:e} below {threshold:e}")]
    NotFactorizable { pivot: f64, threshold: f64 },

    #[error("point does not lie in the overlap of charts {from} and {to}")]
    Overlap { from: usize, to: usize },

    #[error("chart index {index} out of range 0..={n}")]
    ChartIndex { index: usize, n: usize },

    #[error("profile undefined at tau = {tau} (tau0 = {tau0}, a = {a})")]
    Domain { tau: f64, tau0: f64, a: f64 },

    #[error("element is not in the parabolic subalgebra (upper-right block norm {norm:e})")]
    NotParabolic { norm: f64 },

    #[error("no chart admits a Gauss factorization of the translated point")]
    NoAdmissibleChart,

    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
