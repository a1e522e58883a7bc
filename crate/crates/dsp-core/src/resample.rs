//! Band-limited resampling and clip standardization.
//!
//! Rate conversion uses windowed-sinc interpolation with a 64-sample kernel
//! support (Blackman taper). When downsampling, the sinc cutoff is lowered to
//! the target Nyquist so aliasing is suppressed.

use std::f64::consts::PI;

use crate::error::{DspError, Result};
use crate::types::Waveform;

const HALF_SUPPORT: f64 = 32.0;

/// Resample to `target_rate_hz`. Returns the input unchanged (bit-identical)
/// when the rates already match.
pub fn resample(signal: &Waveform, target_rate_hz: u32) -> Result<Waveform> {
    if target_rate_hz == 0 {
        return Err(DspError::InvalidArgument(
            "target rate must be positive".into(),
        ));
    }
    if signal.sample_rate_hz() == target_rate_hz {
        return Ok(signal.clone());
    }

    let src = signal.sample_rate_hz() as f64;
    let dst = target_rate_hz as f64;
    let ratio = dst / src;
    let n_in = signal.len();
    let n_out = (n_in as f64 * ratio).round() as usize;
    let x = signal.samples();

    // Cutoff in cycles per input sample; at most the input Nyquist.
    let fc = 0.5 * ratio.min(1.0);
    let gain = 2.0 * fc;

    let mut out = vec![0.0f64; n_out];
    for (i, o) in out.iter_mut().enumerate() {
        let t = i as f64 / ratio;
        let j_lo = (t - HALF_SUPPORT).ceil() as i64;
        let j_hi = (t + HALF_SUPPORT).floor() as i64;
        let mut acc = 0.0;
        for j in j_lo..=j_hi {
            if j < 0 || j as usize >= n_in {
                continue;
            }
            let u = t - j as f64;
            acc += x[j as usize] * gain * sinc(2.0 * fc * u) * blackman(u / HALF_SUPPORT);
        }
        *o = acc;
    }

    Waveform::new(out, target_rate_hz)
}

/// Resample to `target_rate_hz`, then trim or zero-pad to exactly
/// `target_rate_hz * target_seconds` samples.
pub fn standardize(signal: &Waveform, target_rate_hz: u32, target_seconds: f64) -> Result<Waveform> {
    if !(target_seconds > 0.0) {
        return Err(DspError::InvalidArgument(
            "target duration must be positive".into(),
        ));
    }
    let resampled = resample(signal, target_rate_hz)?;
    let target_len = (target_rate_hz as f64 * target_seconds).round() as usize;
    if resampled.len() == target_len {
        return Ok(resampled);
    }
    let mut samples = resampled.into_samples();
    samples.resize(target_len, 0.0);
    Waveform::new(samples, target_rate_hz)
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-12 {
        1.0
    } else {
        (PI * u).sin() / (PI * u)
    }
}

fn blackman(v: f64) -> f64 {
    if v.abs() >= 1.0 {
        0.0
    } else {
        0.42 + 0.5 * (PI * v).cos() + 0.08 * (2.0 * PI * v).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::welch_psd;

    fn sine(freq: f64, fs: u32, n: usize) -> Waveform {
        let samples: Vec<f64> = (0..n)
            .map(|i| (2.0 * PI * freq * i as f64 / fs as f64).sin())
            .collect();
        Waveform::new(samples, fs).unwrap()
    }

    #[test]
    fn matching_input_is_unchanged() {
        let w = sine(440.0, 16000, 48000);
        let out = standardize(&w, 16000, 3.0).unwrap();
        assert_eq!(out, w);
    }

    #[test]
    fn short_input_is_zero_padded() {
        let w = sine(440.0, 16000, 16000);
        let out = standardize(&w, 16000, 3.0).unwrap();
        assert_eq!(out.len(), 48000);
        assert_eq!(out.samples()[..16000], w.samples()[..]);
        assert!(out.samples()[16000..].iter().all(|&s| s == 0.0));
    }

    #[test]
    fn long_input_is_trimmed() {
        let w = sine(440.0, 16000, 64000);
        let out = standardize(&w, 16000, 3.0).unwrap();
        assert_eq!(out.len(), 48000);
    }

    #[test]
    fn upsampled_sine_keeps_spectral_peak() {
        let w = sine(500.0, 8000, 24000);
        let out = standardize(&w, 16000, 3.0).unwrap();
        assert_eq!(out.len(), 48000);
        assert_eq!(out.sample_rate_hz(), 16000);
        let psd = welch_psd(&out, 1024, 0.5).unwrap();
        let peak = psd
            .power_density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let bin_hz = 16000.0 / 1024.0;
        assert!(
            (psd.freqs_hz[peak] - 500.0).abs() <= bin_hz,
            "peak at {} Hz",
            psd.freqs_hz[peak]
        );
    }

    #[test]
    fn downsampled_sine_keeps_spectral_peak() {
        let w = sine(500.0, 16000, 48000);
        let out = standardize(&w, 8000, 3.0).unwrap();
        assert_eq!(out.len(), 24000);
        let psd = welch_psd(&out, 1024, 0.5).unwrap();
        let peak = psd
            .power_density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let bin_hz = 8000.0 / 1024.0;
        assert!((psd.freqs_hz[peak] - 500.0).abs() <= bin_hz);
    }

    #[test]
    fn standardize_is_idempotent() {
        let w = sine(500.0, 8000, 20000);
        let once = standardize(&w, 16000, 3.0).unwrap();
        let twice = standardize(&once, 16000, 3.0).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn non_positive_targets_error() {
        let w = sine(440.0, 16000, 1000);
        assert!(standardize(&w, 0, 3.0).is_err());
        assert!(standardize(&w, 16000, 0.0).is_err());
        assert!(standardize(&w, 16000, -1.0).is_err());
    }

    #[test]
    fn upsampling_preserves_amplitude() {
        let w = sine(500.0, 8000, 24000);
        let out = resample(&w, 16000).unwrap();
        // Compare RMS away from the edges.
        let mid = &out.samples()[1000..out.len() - 1000];
        let rms = (mid.iter().map(|s| s * s).sum::<f64>() / mid.len() as f64).sqrt();
        assert!((rms - (0.5f64).sqrt()).abs() < 0.01, "rms {rms}");
    }
}
