use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The explicit step would be unstable for the requested CFL number.
    #[error("CFL number {sigma:.6} exceeds the stability limit {limit}")]
    Stability { sigma: f64, limit: f64 },

    /// Phase rotation over tau leaves the principal branch of the logarithm.
    #[error("phase rotation {rotation:.6} at kappa = {kappa:.6} leaves the principal branch (|.| >= pi)")]
    BranchViolation { kappa: f64, rotation: f64 },

    #[error("measurement undefined: {0}")]
    MeasurementUndefined(String),

    #[error("malformed data: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
