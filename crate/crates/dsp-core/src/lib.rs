//! Shared signal primitives for the ANC bound toolkit: waveform and impulse
//! response types, FFT convolution, Welch spectral estimation, band-limited
//! resampling and mono WAV I/O.
//!
//! All operations are pure functions of their inputs; the domain types are
//! immutable after construction and safe to share across threads.

mod convolve;
mod db;
mod error;
mod resample;
mod spectral;
mod types;
pub mod wav;

pub use convolve::{fft_convolve, fft_convolve_full};
pub use db::{DbValue, DB_FLOOR_DB};
pub use error::{DspError, Result};
pub use resample::{resample, standardize};
pub use spectral::{psd_power, welch_psd, PsdEstimate};
pub use types::{signal_power, ImpulseResponse, Waveform};
