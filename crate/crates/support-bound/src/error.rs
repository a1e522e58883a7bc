use thiserror::Error;

#[derive(Debug, Error)]
pub enum SupportError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("undefined ratio: {0}")]
    UndefinedRatio(&'static str),

    #[error(transparent)]
    Dsp(#[from] dsp_core::DspError),
}
