//! Synthetic stand-in noises for the evaluation sweep, all normalized to
//! unit RMS and fully determined by a seed.
//!
//! - `white`: Gaussian noise.
//! - `engine_surrogate`: harmonic comb (repetitive tonal structure) over a
//!   low broadband floor.
//! - `factory_surrogate`: colored broadband noise with random impulsive
//!   transients.
//! - `babble_surrogate`: a sum of slowly AM-modulated speech-band noises.

use std::f64::consts::PI;
use std::str::FromStr;

use dsp_core::{fft_convolve, ImpulseResponse, Waveform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::sweep::ReportError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseKind {
    White,
    BabbleSurrogate,
    EngineSurrogate,
    FactorySurrogate,
}

impl NoiseKind {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseKind::White => "white",
            NoiseKind::BabbleSurrogate => "babble_surrogate",
            NoiseKind::EngineSurrogate => "engine_surrogate",
            NoiseKind::FactorySurrogate => "factory_surrogate",
        }
    }

    pub fn all() -> [NoiseKind; 4] {
        [
            NoiseKind::White,
            NoiseKind::BabbleSurrogate,
            NoiseKind::EngineSurrogate,
            NoiseKind::FactorySurrogate,
        ]
    }
}

impl FromStr for NoiseKind {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "white" => Ok(NoiseKind::White),
            "babble_surrogate" => Ok(NoiseKind::BabbleSurrogate),
            "engine_surrogate" => Ok(NoiseKind::EngineSurrogate),
            "factory_surrogate" => Ok(NoiseKind::FactorySurrogate),
            other => Err(ReportError::Config(format!(
                "unknown noise kind '{other}' (expected white, babble_surrogate, \
                 engine_surrogate or factory_surrogate)"
            ))),
        }
    }
}

/// Generate `seconds` of the given noise kind at `sample_rate_hz`.
pub fn synth_noise(
    kind: NoiseKind,
    seconds: f64,
    sample_rate_hz: u32,
    seed: u64,
) -> Result<Waveform, ReportError> {
    if !(seconds > 0.0) {
        return Err(ReportError::Config(format!(
            "noise duration {seconds} s must be positive"
        )));
    }
    if sample_rate_hz == 0 {
        return Err(ReportError::Config("sample rate must be positive".into()));
    }
    let n = (seconds * sample_rate_hz as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = match kind {
        NoiseKind::White => gaussian(n, &mut rng),
        NoiseKind::EngineSurrogate => engine(n, sample_rate_hz, &mut rng),
        NoiseKind::FactorySurrogate => factory(n, sample_rate_hz, &mut rng),
        NoiseKind::BabbleSurrogate => babble(n, sample_rate_hz, &mut rng)?,
    };
    Ok(Waveform::new(normalize_rms(samples), sample_rate_hz)?)
}

fn gaussian(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

/// Harmonic comb at ~80 Hz with 1/k amplitudes plus a -26 dB noise floor.
fn engine(n: usize, fs: u32, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let f0 = 80.0;
    let harmonics = 12;
    let phases: Vec<f64> = (0..harmonics).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
    let mut out = vec![0.0f64; n];
    let mut comb_power = 0.0;
    for (k, &phase) in phases.iter().enumerate() {
        let freq = f0 * (k + 1) as f64;
        if freq >= fs as f64 / 2.0 {
            break;
        }
        let amp = 1.0 / (k + 1) as f64;
        comb_power += amp * amp / 2.0;
        for (i, o) in out.iter_mut().enumerate() {
            *o += amp * (2.0 * PI * freq * i as f64 / fs as f64 + phase).sin();
        }
    }
    let floor_rms = (comb_power * 10f64.powf(-26.0 / 10.0)).sqrt();
    for o in out.iter_mut() {
        let w: f64 = StandardNormal.sample(rng);
        *o += floor_rms * w;
    }
    out
}

/// One-pole-colored broadband noise with Poisson-timed decaying bursts.
fn factory(n: usize, fs: u32, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = vec![0.0f64; n];
    let mut lp = 0.0f64;
    for o in out.iter_mut() {
        let w: f64 = StandardNormal.sample(rng);
        lp += 0.25 * (w - lp);
        *o = 0.6 * lp + 0.4 * w;
    }
    let base_rms = rms(&out);

    // Impulsive transients: exponential interarrival, 3 ms decay.
    let mean_gap_s = 0.12;
    let tau = 0.003 * fs as f64;
    let burst_len = (5.0 * tau) as usize;
    let mut t = 0.0f64;
    loop {
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        t += -mean_gap_s * u.ln();
        let start = (t * fs as f64) as usize;
        if start >= n {
            break;
        }
        let amp = rng.gen_range(3.0..6.0) * base_rms * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        for j in 0..burst_len.min(n - start) {
            out[start + j] += amp * (-(j as f64) / tau).exp();
        }
    }
    out
}

/// Sum of band-passed noises with slow independent amplitude modulation.
fn babble(n: usize, fs: u32, rng: &mut ChaCha8Rng) -> Result<Vec<f64>, ReportError> {
    let edges_hz = [250.0, 450.0, 750.0, 1200.0, 1900.0, 2800.0, 3600.0];
    let mut out = vec![0.0f64; n];
    for band in edges_hz.windows(2) {
        let raw = Waveform::new(gaussian(n, rng), fs)?;
        let bp = bandpass(band[0] / fs as f64, band[1] / fs as f64, 257, fs);
        let filtered = fft_convolve(&raw, &bp)?;
        let mod_freq = rng.gen_range(1.5..4.5);
        let mod_phase = rng.gen_range(0.0..2.0 * PI);
        for (i, (o, &v)) in out.iter_mut().zip(filtered.samples()).enumerate() {
            let env = 0.25 + 0.75 * (0.5 + 0.5 * (2.0 * PI * mod_freq * i as f64 / fs as f64 + mod_phase).sin());
            *o += env * v;
        }
    }
    Ok(out)
}

/// Windowed-sinc band-pass (difference of two low-passes), cutoffs in
/// cycles/sample.
fn bandpass(lo: f64, hi: f64, taps: usize, fs: u32) -> ImpulseResponse {
    let center = (taps - 1) as f64 / 2.0;
    let coeffs: Vec<f64> = (0..taps)
        .map(|i| {
            let t = i as f64 - center;
            let lp = |fc: f64| {
                if t.abs() < 1e-12 {
                    2.0 * fc
                } else {
                    (2.0 * PI * fc * t).sin() / (PI * t)
                }
            };
            let phase = 2.0 * PI * i as f64 / (taps - 1) as f64;
            let w = 0.42 - 0.5 * phase.cos() + 0.08 * (2.0 * phase).cos();
            (lp(hi) - lp(lo)) * w
        })
        .collect();
    ImpulseResponse::new(coeffs, fs).expect("bandpass taps are finite")
}

fn rms(v: &[f64]) -> f64 {
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

fn normalize_rms(mut v: Vec<f64>) -> Vec<f64> {
    let r = rms(&v);
    if r > 0.0 {
        let inv = 1.0 / r;
        v.iter_mut().for_each(|x| *x *= inv);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use dsp_core::{signal_power, welch_psd};

    const FS: u32 = 16000;

    #[test]
    fn white_noise_is_reproducible_and_flat() {
        let a = synth_noise(NoiseKind::White, 3.0, FS, 9).unwrap();
        let b = synth_noise(NoiseKind::White, 3.0, FS, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 48000);

        // Band-averaged flatness within 1 dB.
        let psd = welch_psd(&a, 1024, 0.5).unwrap();
        let bands = 16;
        let lo_hz = 200.0;
        let hi_hz = 7800.0;
        let mut means = Vec::new();
        for b in 0..bands {
            let f0 = lo_hz + (hi_hz - lo_hz) * b as f64 / bands as f64;
            let f1 = lo_hz + (hi_hz - lo_hz) * (b + 1) as f64 / bands as f64;
            let vals: Vec<f64> = psd
                .freqs_hz
                .iter()
                .zip(psd.power_density.iter())
                .filter(|(f, _)| **f >= f0 && **f < f1)
                .map(|(_, p)| *p)
                .collect();
            means.push(vals.iter().sum::<f64>() / vals.len() as f64);
        }
        let max = means.iter().cloned().fold(f64::MIN, f64::max);
        let min = means.iter().cloned().fold(f64::MAX, f64::min);
        let spread_db = 10.0 * (max / min).log10();
        assert!(spread_db < 1.0, "band spread {spread_db} dB");
    }

    #[test]
    fn engine_surrogate_has_harmonic_peaks() {
        let w = synth_noise(NoiseKind::EngineSurrogate, 3.0, FS, 4).unwrap();
        let psd = welch_psd(&w, 4096, 0.5).unwrap();
        let bin_hz = FS as f64 / 4096.0;

        // Median as the broadband floor level.
        let mut sorted: Vec<f64> = psd.power_density.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let floor = sorted[sorted.len() / 2];

        let mut strong_peaks = 0;
        for k in 1..=6 {
            let target = 80.0 * k as f64;
            let idx = (target / bin_hz).round() as usize;
            let peak = psd.power_density[idx.saturating_sub(2)..=(idx + 2).min(psd.power_density.len() - 1)]
                .iter()
                .cloned()
                .fold(f64::MIN, f64::max);
            if 10.0 * (peak / floor).log10() >= 10.0 {
                strong_peaks += 1;
            }
        }
        assert!(strong_peaks >= 3, "only {strong_peaks} harmonic peaks");
    }

    #[test]
    fn all_kinds_have_unit_rms() {
        for kind in NoiseKind::all() {
            let w = synth_noise(kind, 1.0, FS, 11).unwrap();
            let p = signal_power(&w).unwrap();
            assert!((p - 1.0).abs() < 1e-9, "{}: power {p}", kind.name());
        }
    }

    #[test]
    fn babble_energy_concentrates_in_speech_band() {
        let w = synth_noise(NoiseKind::BabbleSurrogate, 3.0, FS, 15).unwrap();
        let psd = welch_psd(&w, 1024, 0.5).unwrap();
        let total = dsp_core::psd_power(&psd);
        let in_band: f64 = psd
            .freqs_hz
            .iter()
            .zip(psd.power_density.iter())
            .filter(|(f, _)| **f >= 150.0 && **f <= 4000.0)
            .map(|(_, p)| *p)
            .sum::<f64>()
            * (psd.freqs_hz[1] - psd.freqs_hz[0]);
        assert!(in_band / total > 0.95, "in-band fraction {}", in_band / total);
    }

    #[test]
    fn factory_surrogate_has_transients() {
        let w = synth_noise(NoiseKind::FactorySurrogate, 3.0, FS, 8).unwrap();
        // Impulsive content: peak factor well above a Gaussian's typical ~4.5.
        let peak = w.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(peak > 5.0, "peak factor {peak}");
    }

    #[test]
    fn zero_duration_is_rejected() {
        assert!(synth_noise(NoiseKind::White, 0.0, FS, 1).is_err());
        assert!(synth_noise(NoiseKind::White, -1.0, FS, 1).is_err());
    }
}
