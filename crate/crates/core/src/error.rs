use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The Green's function of simple random walk diverges for d < 3.
    #[error("dimension must be at least 3, got {0}")]
    DimensionTooSmall(usize),

    #[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureNotConverged { requested: f64, achieved: f64 },

    /// Covariance factorization hit a non-positive pivot; usually a sign
    /// that the Green table was built with too loose a tolerance.
    #[error("covariance is not positive definite (minimum pivot {min_pivot:e} at index {index})")]
    NotPositiveDefinite { min_pivot: f64, index: usize },

    #[error("linear solver failed: {0}")]
    SolverFailure(String),

    #[error("green table (d={d}, radius={radius}) does not cover point {point:?}")]
    OutsideTable {
        d: usize,
        radius: i64,
        point: Vec<i64>,
    },

    #[error("truncation radius {radius} too small: {reason}")]
    Truncation { radius: i64, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cache i/o: {0}")]
    CacheIo(#[from] std::io::Error),

    #[error("cache decode: {0}")]
    CacheDecode(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
