use serde::{Deserialize, Serialize};

use crate::error::{DspError, Result};

/// A uniformly sampled real-valued signal.
///
/// Samples are validated to be finite at construction and are immutable
/// afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Waveform {
    samples: Vec<f64>,
    sample_rate_hz: u32,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(DspError::InvalidArgument(
                "sample rate must be positive".into(),
            ));
        }
        if let Some(index) = samples.iter().position(|s| !s.is_finite()) {
            return Err(DspError::NonFinite { index });
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    /// All-zero waveform of the given length.
    pub fn zeros(len: usize, sample_rate_hz: u32) -> Result<Self> {
        Self::new(vec![0.0; len], sample_rate_hz)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz as f64
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Finite tap sequence of an LTI path, with its sample rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpulseResponse {
    taps: Vec<f64>,
    sample_rate_hz: u32,
}

impl ImpulseResponse {
    pub fn new(taps: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(DspError::InvalidArgument(
                "sample rate must be positive".into(),
            ));
        }
        if taps.is_empty() {
            return Err(DspError::EmptyInput("impulse response taps"));
        }
        if let Some(index) = taps.iter().position(|t| !t.is_finite()) {
            return Err(DspError::NonFinite { index });
        }
        Ok(Self {
            taps,
            sample_rate_hz,
        })
    }

    /// Unit impulse (identity filter).
    pub fn identity(sample_rate_hz: u32) -> Self {
        Self {
            taps: vec![1.0],
            sample_rate_hz,
        }
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Sum of squared taps.
    pub fn energy(&self) -> f64 {
        self.taps.iter().map(|t| t * t).sum()
    }
}

/// Mean of squared samples (the variance for zero-mean signals).
pub fn signal_power(signal: &Waveform) -> Result<f64> {
    if signal.is_empty() {
        return Err(DspError::EmptyInput("signal_power"));
    }
    let sum: f64 = signal.samples().iter().map(|s| s * s).sum();
    Ok(sum / signal.len() as f64)
}
