//! Filtered-x LMS adaptive canceller.
//!
//! The reference is pre-filtered by the secondary-path estimate,
//! `x'(n) = S_hat * x(n)`, and the adaptive filter W produces
//! `y(n) = W^T x_vec(n)`. The error is formed in-loop against the true
//! secondary path, `e(n) = d(n) - (S * y)(n)`, and drives the update
//!
//! ```text
//! W <- (1 - mu * leak) W + step * e(n) * x'_vec(n)
//! step = mu / (||x'_vec||^2 + eps)   when normalized, else mu
//! ```

use dsp_core::{signal_power, ImpulseResponse, Waveform};

use crate::error::AncError;

/// Regularizer in the normalized step denominator.
const NORM_EPS: f64 = 1e-12;
/// Smoothing factor of the running error-power estimate used by the
/// divergence detector.
const DIVERGENCE_EMA: f64 = 1.0 / 256.0;
/// Divergence threshold as a multiple of the disturbance RMS.
const DIVERGENCE_FACTOR: f64 = 1e3;

#[derive(Debug, Clone)]
pub struct FxlmsConfig {
    /// Adaptive filter length in taps.
    pub filter_len: usize,
    /// LMS step size mu.
    pub step_size: f64,
    /// Leakage coefficient in [0, 1); 0 disables leakage.
    pub leak: f64,
    /// Secondary-path estimate used to filter the reference.
    pub secondary_estimate: ImpulseResponse,
    /// Normalize the step by the running power of the filtered reference.
    pub normalize: bool,
}

impl FxlmsConfig {
    fn validate(&self) -> Result<(), AncError> {
        if self.filter_len == 0 {
            return Err(AncError::InvalidArgument("filter_len must be >= 1".into()));
        }
        if !(self.step_size >= 0.0) || !self.step_size.is_finite() {
            return Err(AncError::InvalidArgument(format!(
                "step_size {} must be finite and nonnegative",
                self.step_size
            )));
        }
        if !(0.0..1.0).contains(&self.leak) {
            return Err(AncError::InvalidArgument(format!(
                "leak {} must be in [0, 1)",
                self.leak
            )));
        }
        Ok(())
    }
}

/// Run the FxLMS loop and return the cancellation signal `y`.
///
/// `secondary_true` is the path the loudspeaker output actually traverses;
/// the in-loop error is computed against it. Divergence (running error RMS
/// above 1e3 x RMS of `d`) aborts with an error naming the step size.
pub fn run_fxlms(
    x: &Waveform,
    d: &Waveform,
    config: &FxlmsConfig,
    secondary_true: &ImpulseResponse,
) -> Result<Waveform, AncError> {
    config.validate()?;
    if x.len() != d.len() {
        return Err(AncError::InvalidArgument(format!(
            "x has {} samples but d has {}",
            x.len(),
            d.len()
        )));
    }
    if x.is_empty() {
        return Err(AncError::InvalidArgument("empty input".into()));
    }

    if x.sample_rate_hz() != config.secondary_estimate.sample_rate_hz() {
        return Err(AncError::Dsp(dsp_core::DspError::SampleRateMismatch {
            left: x.sample_rate_hz(),
            right: config.secondary_estimate.sample_rate_hz(),
        }));
    }
    let xs = x.samples();
    // Direct-form filtered reference: partial sums depend only on the input
    // prefix, which keeps truncated reruns bit-identical (causality).
    let sh = config.secondary_estimate.taps();
    let xf: Vec<f64> = (0..xs.len())
        .map(|i| {
            let taps = sh.len().min(i + 1);
            (0..taps).map(|k| sh[k] * xs[i - k]).sum()
        })
        .collect();
    let ds = d.samples();
    let s = secondary_true.taps();
    let n = xs.len();
    let l = config.filter_len;

    let rms_d = signal_power(d)?.sqrt();
    let divergence_rms = DIVERGENCE_FACTOR * rms_d;

    let mut w = vec![0.0f64; l];
    let mut y = vec![0.0f64; n];
    let mut xf_power = 0.0f64;
    let mut err_power_ema = 0.0f64;

    for i in 0..n {
        // y(n) = W^T x_vec(n)
        let taps = l.min(i + 1);
        let mut acc = 0.0;
        for k in 0..taps {
            acc += w[k] * xs[i - k];
        }
        y[i] = acc;

        // a(n) = (S * y)(n), causal direct form over the y history
        let s_taps = s.len().min(i + 1);
        let mut a = 0.0;
        for k in 0..s_taps {
            a += s[k] * y[i - k];
        }
        let e = ds[i] - a;

        if !e.is_finite() {
            return Err(AncError::Divergence {
                step_size: config.step_size,
                at_sample: i,
            });
        }
        err_power_ema += DIVERGENCE_EMA * (e * e - err_power_ema);
        if rms_d > 0.0 && err_power_ema.sqrt() > divergence_rms {
            return Err(AncError::Divergence {
                step_size: config.step_size,
                at_sample: i,
            });
        }

        // Running power of the filtered reference over the filter window.
        xf_power += xf[i] * xf[i];
        if i >= l {
            xf_power -= xf[i - l] * xf[i - l];
            if xf_power < 0.0 {
                xf_power = 0.0;
            }
        }
        let step = if config.normalize {
            config.step_size / (xf_power + NORM_EPS)
        } else {
            config.step_size
        };

        let decay = 1.0 - config.step_size * config.leak;
        let scaled_e = step * e;
        for k in 0..taps {
            w[k] = decay * w[k] + scaled_e * xf[i - k];
        }
        if decay != 1.0 {
            for wk in w.iter_mut().take(l).skip(taps) {
                *wk *= decay;
            }
        }
    }

    Ok(Waveform::new(y, x.sample_rate_hz())?)
}
