use thiserror::Error;

/// Errors raised by the numerics and the planner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resonance singularity at |omega| = {omega} eV (lossless medium)")]
    ResonanceSingularity { omega: f64 },

    #[error("medium parameters rejected: {0}")]
    InvalidMedium(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("coincident points: the correlator diverges at (dt, dx) = (0, 0)")]
    Coincidence,

    #[error("pole of the asymptotic expansion on the medium light cone n|dx| = |dt|")]
    MediumCone,

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("not converged: {0}")]
    NotConverged(String),

    #[error("unit mismatch: {0}")]
    Units(String),

    #[error("optical data, line {line}: {message}")]
    OpticalData { line: u64, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
