use thiserror::Error;

/// Errors shared by the signal primitives.
#[derive(Debug, Error)]
pub enum DspError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sample rate mismatch: {left} Hz vs {right} Hz")]
    SampleRateMismatch { left: u32, right: u32 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("wav: {0}")]
    Wav(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DspError>;
