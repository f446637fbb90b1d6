use thiserror::Error;

use crate::dynamics::Trajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("matrix is not Hermitian (max |m - m^dag| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid integrator config: {0}")]
    InvalidIntegrator(String),

    #[error("steady state is not unique: kernel dimension {kernel_dim} (smallest singular values {smallest:?})")]
    DegenerateSteadyState { kernel_dim: usize, smallest: Vec<f64> },

    #[error("integration aborted at t = {time}: {reason}")]
    IntegrationAborted {
        time: f64,
        reason: String,
        partial: Box<Trajectory>,
    },

    #[error("analytic steady state undefined at k = l = 0")]
    AnalyticUndefined,

    #[error("charging power undefined: tau = 0")]
    ZeroChargingTime,

    #[error("invalid temperature {0}: use a direct occupation instead")]
    NonPositiveTemperature(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
