use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AncError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "fxlms diverged at sample {at_sample} (step size {step_size}): \
         error RMS exceeded 1e3 x disturbance RMS"
    )]
    Divergence { step_size: f64, at_sample: usize },

    #[error("canceller output mismatch: expected {expected} samples, got {got}")]
    CancellerOutputMismatch { expected: usize, got: usize },

    #[error("ingestion of {path}: {reason}")]
    Ingestion { path: PathBuf, reason: String },

    #[error(transparent)]
    Dsp(#[from] dsp_core::DspError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
