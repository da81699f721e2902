use thiserror::Error;

use crate::pde::Trajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-finite value in {context} at index {index}")]
    NonFinite { context: &'static str, index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resolution guard: {0}")]
    Resolution(String),

    #[error("blow-up at t = {t}: max |u_x| = {max_slope}")]
    BlowUp {
        t: f64,
        max_slope: f64,
        /// Everything recorded up to (and including) the offending step.
        partial: Box<Trajectory>,
    },

    #[error("CFL violation at t = {t}: dt = {dt} exceeds limit {limit}")]
    CflViolation { t: f64, dt: f64, limit: f64 },

    #[error("peakon collision at t = {t}: minimum gap {gap}")]
    Collision { t: f64, gap: f64 },

    #[error("peakon state became non-finite at t = {t}")]
    PeakonNonFinite { t: f64 },

    #[error("malformed binary trajectory: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
