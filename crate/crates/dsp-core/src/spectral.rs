//! Welch power spectral density estimation.
//!
//! The estimate is an averaged Hann-tapered periodogram on a one-sided
//! frequency grid `0..fs/2`. Two conventions keep the estimate numerically
//! consistent with the time-domain power:
//!
//! - One-sided folding doubles every bin *including* DC and Nyquist. The end
//!   cells of the grid have half width, so trapezoidal integration of the
//!   density recovers the full-band power exactly rather than losing half a
//!   bin at each edge.
//! - After averaging, the density is rescaled so that its trapezoidal
//!   integral equals the mean squared sample value of the analyzed signal.
//!   The spectral shape is untouched; only the overall calibration is pinned
//!   to the realization's power.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{DspError, Result};
use crate::types::{signal_power, Waveform};

/// One-sided power spectral density on an ascending frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdEstimate {
    /// Bin center frequencies in Hz, ascending from 0 to fs/2.
    pub freqs_hz: Vec<f64>,
    /// Power per Hz at each grid frequency; nonnegative.
    pub power_density: Vec<f64>,
    /// Analysis window length in samples.
    pub window_len: usize,
    /// Fractional overlap between adjacent segments, in [0, 1).
    pub overlap_frac: f64,
}

impl PsdEstimate {
    /// Linear interpolation of the density at an arbitrary frequency,
    /// clamped to the grid edges.
    pub fn density_at(&self, freq_hz: f64) -> f64 {
        let freqs = &self.freqs_hz;
        let n = freqs.len();
        if n == 0 {
            return 0.0;
        }
        if freq_hz <= freqs[0] {
            return self.power_density[0];
        }
        if freq_hz >= freqs[n - 1] {
            return self.power_density[n - 1];
        }
        let idx = freqs.partition_point(|&f| f <= freq_hz);
        let (f0, f1) = (freqs[idx - 1], freqs[idx]);
        let (p0, p1) = (self.power_density[idx - 1], self.power_density[idx]);
        let t = if f1 > f0 { (freq_hz - f0) / (f1 - f0) } else { 0.0 };
        p0 + t * (p1 - p0)
    }
}

/// Welch-averaged PSD of `signal` with a Hann taper.
///
/// Errors if the window is longer than the signal or the overlap fraction is
/// outside [0, 1).
pub fn welch_psd(signal: &Waveform, window_len: usize, overlap_frac: f64) -> Result<PsdEstimate> {
    if window_len == 0 || window_len > signal.len() {
        return Err(DspError::InvalidArgument(format!(
            "window_len {} must be in 1..={}",
            window_len,
            signal.len()
        )));
    }
    if !(0.0..1.0).contains(&overlap_frac) {
        return Err(DspError::InvalidArgument(format!(
            "overlap_frac {overlap_frac} must be in [0, 1)"
        )));
    }

    let fs = signal.sample_rate_hz() as f64;
    let n = window_len;
    let half_bins = n / 2 + 1;

    // Periodic Hann taper.
    let window: Vec<f64> = (0..n)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos()))
        .collect();
    let window_energy: f64 = window.iter().map(|w| w * w).sum();

    let hop = ((n as f64 * (1.0 - overlap_frac)).round() as usize).max(1);
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);

    let samples = signal.samples();
    let mut acc = vec![0.0f64; half_bins];
    let mut segments = 0usize;
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    let mut start = 0usize;
    while start + n <= samples.len() {
        for (i, b) in buf.iter_mut().enumerate() {
            *b = Complex::new(samples[start + i] * window[i], 0.0);
        }
        fft.process(&mut buf);
        for (i, a) in acc.iter_mut().enumerate() {
            *a += buf[i].norm_sqr();
        }
        segments += 1;
        start += hop;
    }
    debug_assert!(segments > 0);

    // One-sided density, all bins doubled (half-width end cells).
    let scale = 2.0 / (fs * window_energy * segments as f64);
    let mut density: Vec<f64> = acc.iter().map(|a| a * scale).collect();
    let freqs: Vec<f64> = (0..half_bins).map(|i| i as f64 * fs / n as f64).collect();

    // Calibrate the integral to the realization's average power.
    let power = signal_power(signal)?;
    let integral = trapezoid(&freqs, &density);
    if integral > 0.0 && power > 0.0 {
        let k = power / integral;
        for d in &mut density {
            *d *= k;
        }
    }

    Ok(PsdEstimate {
        freqs_hz: freqs,
        power_density: density,
        window_len,
        overlap_frac,
    })
}

/// Trapezoidal integral of the PSD over its full band.
pub fn psd_power(psd: &PsdEstimate) -> f64 {
    trapezoid(&psd.freqs_hz, &psd.power_density)
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 1..x.len() {
        acc += (x[i] - x[i - 1]) * 0.5 * (y[i] + y[i - 1]);
    }
    acc
}
