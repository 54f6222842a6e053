use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid discriminant {0}: must be a negative fundamental discriminant")]
    InvalidDiscriminant(i64),
    #[error("zero matrix has no Mobius action")]
    ZeroMatrix,
    #[error("determinant is not 1")]
    DetNotOne,
    #[error("division by zero element")]
    ZeroDivisor,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("geodesics are linked (they cross)")]
    LinkedGeodesics,
    #[error("no common perpendicular: geodesics share an endpoint")]
    SharedEndpoint,
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("sieve needs {needed_bytes} bytes but the limit is {limit_bytes}; use bands of at most {band_rows} rows")]
    MemoryBound { needed_bytes: u64, limit_bytes: u64, band_rows: u64 },
    #[error("zeta_K(2) methods disagree: series {series} vs Euler product {euler}")]
    ZetaMismatch { series: f64, euler: f64 },
    #[error("degenerate least-squares design matrix")]
    Degenerate,
    #[error("value out of supported range: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;
