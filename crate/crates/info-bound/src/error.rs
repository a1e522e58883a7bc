use thiserror::Error;

#[derive(Debug, Error)]
pub enum InfoError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("signals of {got} samples are shorter than one frame of {frame_len}")]
    TooShort { got: usize, frame_len: usize },

    #[error(transparent)]
    Dsp(#[from] dsp_core::DspError),
}
