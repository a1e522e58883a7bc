use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};

use dsp_core::ImpulseResponse;

use crate::error::SupportError;

/// One-sided spectral support mask of an impulse response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportSet {
    pub fft_size: usize,
    /// One bool per one-sided bin (`fft_size/2 + 1` entries): true when the
    /// bin's magnitude is within `threshold_db` of the spectrum's peak.
    pub mask: Vec<bool>,
    /// Threshold in dB below the spectrum's own peak.
    pub threshold_db: f64,
    /// One-sided magnitude spectrum (linear scale).
    pub magnitude: Vec<f64>,
}

impl SupportSet {
    pub fn bins(&self) -> usize {
        self.mask.len()
    }

    pub fn support_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }
}

/// Zero-padded FFT magnitude support at a peak-relative threshold.
pub fn spectral_support(
    ir: &ImpulseResponse,
    fft_size: usize,
    threshold_db: f64,
) -> Result<SupportSet, SupportError> {
    if fft_size < ir.len() {
        return Err(SupportError::InvalidArgument(format!(
            "fft_size {fft_size} smaller than impulse response of {} taps",
            ir.len()
        )));
    }
    if !(threshold_db > 0.0) {
        return Err(SupportError::InvalidArgument(format!(
            "threshold_db {threshold_db} must be positive"
        )));
    }

    let mut buf: Vec<Complex<f64>> = ir.taps().iter().map(|&t| Complex::new(t, 0.0)).collect();
    buf.resize(fft_size, Complex::new(0.0, 0.0));
    FftPlanner::<f64>::new()
        .plan_fft_forward(fft_size)
        .process(&mut buf);

    let bins = fft_size / 2 + 1;
    let magnitude: Vec<f64> = buf[..bins].iter().map(|c| c.norm()).collect();
    let peak = magnitude.iter().fold(0.0f64, |m, &v| m.max(v));
    // Compare in the linear domain: bin in support <=> mag >= peak * 10^(-thr/20).
    let cut = peak * 10f64.powf(-threshold_db / 20.0);
    let mask: Vec<bool> = magnitude.iter().map(|&m| m >= cut && peak > 0.0).collect();

    Ok(SupportSet {
        fft_size,
        mask,
        threshold_db,
        magnitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FS: u32 = 16000;

    #[test]
    fn unit_impulse_has_full_support() {
        let ir = ImpulseResponse::identity(FS);
        let sup = spectral_support(&ir, 1024, 45.0).unwrap();
        assert_eq!(sup.bins(), 513);
        assert!(sup.mask.iter().all(|&m| m));
    }

    #[test]
    fn two_tap_averager_excludes_nyquist_keeps_dc() {
        // |H(w)| = |cos(w/2)|: peak at DC, null at Nyquist.
        let ir = ImpulseResponse::new(vec![0.5, 0.5], FS).unwrap();
        let sup = spectral_support(&ir, 1024, 45.0).unwrap();
        assert!(sup.mask[0], "DC must be in support");
        assert!(!sup.mask[512], "Nyquist null must be excluded");
        // Analytic check across bins: in support iff |cos(pi k / 1024)|
        // >= 10^(-45/20).
        let cut = 10f64.powf(-45.0 / 20.0);
        for (k, &m) in sup.mask.iter().enumerate() {
            let mag = (std::f64::consts::PI * k as f64 / 1024.0).cos().abs();
            assert_eq!(m, mag >= cut - 1e-12, "bin {k}: |H| {mag}");
        }
    }

    #[test]
    fn near_zero_threshold_keeps_only_peak_bins() {
        let ir = ImpulseResponse::new(vec![0.5, 0.5], FS).unwrap();
        let sup = spectral_support(&ir, 1024, 1e-9).unwrap();
        assert!(sup.mask[0]);
        assert_eq!(sup.support_count(), 1);
    }

    #[test]
    fn fft_smaller_than_ir_is_rejected() {
        let ir = ImpulseResponse::new(vec![1.0; 64], FS).unwrap();
        assert!(spectral_support(&ir, 32, 45.0).is_err());
    }

    #[test]
    fn non_positive_threshold_is_rejected() {
        let ir = ImpulseResponse::identity(FS);
        assert!(spectral_support(&ir, 64, 0.0).is_err());
        assert!(spectral_support(&ir, 64, -3.0).is_err());
    }

    #[test]
    fn threshold_monotonicity_never_shrinks_support() {
        let taps: Vec<f64> = (0..128)
            .map(|i| ((i as f64 * 0.37).sin() * (-(i as f64) / 40.0).exp()))
            .collect();
        let ir = ImpulseResponse::new(taps, FS).unwrap();
        let narrow = spectral_support(&ir, 512, 20.0).unwrap();
        let wide = spectral_support(&ir, 512, 45.0).unwrap();
        for (n, w) in narrow.mask.iter().zip(wide.mask.iter()) {
            assert!(!n | w, "wide support must contain narrow support");
        }
    }

    #[test]
    fn all_zero_ir_has_empty_support() {
        let ir = ImpulseResponse::new(vec![0.0; 8], FS).unwrap();
        let sup = spectral_support(&ir, 16, 45.0).unwrap();
        assert_eq!(sup.support_count(), 0);
    }
}
