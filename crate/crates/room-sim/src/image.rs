//! Allen-Berkley image-source RIR synthesis.
//!
//! Each image source contributes `beta^(reflection count) / (4 pi dist)` at
//! its propagation delay `dist / c`. Fractional delays are realized with a
//! Hann-windowed sinc interpolation kernel of +-20 samples support; an
//! optional recursive high-pass post-filter (100 Hz) removes the DC drift the
//! image sum accumulates.

use std::f64::consts::PI;

use dsp_core::ImpulseResponse;

use crate::config::{beta_from_t60, RoomConfig, RoomError};

/// Interpolation kernel width in samples (+-20 around the true delay).
const KERNEL_WIDTH: i64 = 40;
/// Normalized low-pass cutoff of the interpolation kernel (Nyquist).
const KERNEL_CUTOFF: f64 = 0.5;
/// High-pass post-filter cutoff in Hz.
const HIGHPASS_CUTOFF_HZ: f64 = 100.0;

/// Generate the RIR for `config`, deriving the wall reflection coefficient
/// from T60 via Sabine's relation.
pub fn generate_rir(config: &RoomConfig) -> Result<ImpulseResponse, RoomError> {
    let beta = beta_from_t60(&config.dims_m, config.t60_s, config.sound_speed_mps)?;
    generate_rir_with_beta(config, beta)
}

/// Generate the RIR with an explicit uniform reflection coefficient
/// (bypasses the Sabine relation; `beta = 0` gives the direct path only).
pub fn generate_rir_with_beta(
    config: &RoomConfig,
    beta: f64,
) -> Result<ImpulseResponse, RoomError> {
    config.validate()?;
    if !(0.0..1.0).contains(&beta) {
        return Err(RoomError::InvalidArgument(format!(
            "reflection coefficient {beta} must be in [0, 1)"
        )));
    }

    let fs = config.sample_rate_hz as f64;
    let cts = config.sound_speed_mps / fs; // meters per sample
    let n = config.n_taps;

    let src = [
        config.source_pos_m[0] / cts,
        config.source_pos_m[1] / cts,
        config.source_pos_m[2] / cts,
    ];
    let mic = [
        config.mic_pos_m[0] / cts,
        config.mic_pos_m[1] / cts,
        config.mic_pos_m[2] / cts,
    ];
    let room = [
        config.dims_m[0] / cts,
        config.dims_m[1] / cts,
        config.dims_m[2] / cts,
    ];

    let order = |len: f64| (n as f64 / (2.0 * len)).ceil() as i64;
    let (n1, n2, n3) = (order(room[0]), order(room[1]), order(room[2]));

    let mut taps = vec![0.0f64; n];
    for mx in -n1..=n1 {
        for my in -n2..=n2 {
            for mz in -n3..=n3 {
                let rm = [
                    2.0 * mx as f64 * room[0],
                    2.0 * my as f64 * room[1],
                    2.0 * mz as f64 * room[2],
                ];
                for q in 0..=1i64 {
                    for j in 0..=1i64 {
                        for k in 0..=1i64 {
                            let rp = [
                                (1 - 2 * q) as f64 * src[0] - mic[0] + rm[0],
                                (1 - 2 * j) as f64 * src[1] - mic[1] + rm[1],
                                (1 - 2 * k) as f64 * src[2] - mic[2] + rm[2],
                            ];
                            let reflections = (mx - q).abs()
                                + mx.abs()
                                + (my - j).abs()
                                + my.abs()
                                + (mz - k).abs()
                                + mz.abs();
                            let refl = beta.powi(reflections as i32);
                            if refl == 0.0 && reflections > 0 {
                                continue;
                            }
                            let dist =
                                (rp[0] * rp[0] + rp[1] * rp[1] + rp[2] * rp[2]).sqrt();
                            if dist < 1e-9 {
                                continue;
                            }
                            let whole = dist.floor();
                            if whole as usize >= n {
                                continue;
                            }
                            let gain = refl / (4.0 * PI * dist * cts);
                            let frac = dist - whole;
                            let start = whole as i64 - KERNEL_WIDTH / 2 + 1;
                            for w in 0..KERNEL_WIDTH {
                                let idx = start + w;
                                if idx < 0 || idx as usize >= n {
                                    continue;
                                }
                                let t = (w - KERNEL_WIDTH / 2 + 1) as f64 - frac;
                                let hann =
                                    0.5 * (1.0 + (2.0 * PI * t / KERNEL_WIDTH as f64).cos());
                                let lp = 2.0 * KERNEL_CUTOFF * sinc(2.0 * PI * KERNEL_CUTOFF * t);
                                taps[idx as usize] += gain * hann * lp;
                            }
                        }
                    }
                }
            }
        }
    }

    if config.highpass_enabled {
        highpass_in_place(&mut taps, fs);
    }

    Ok(ImpulseResponse::new(taps, config.sample_rate_hz)?)
}

/// sin(x)/x with the removable singularity filled in.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Index of the direct-path arrival: the first local maximum of `|taps|`
/// reaching `rel_threshold` times the global peak magnitude.
///
/// The global argmax is not a reliable direct-path detector: symmetric
/// geometries (source and microphone both on a room center plane) make
/// several low-order images arrive simultaneously, and their pile-up can
/// exceed the direct arrival. The earliest significant arrival is the direct
/// path by construction.
pub fn direct_peak_index(ir: &ImpulseResponse, rel_threshold: f64) -> usize {
    let taps = ir.taps();
    let max = taps.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if max == 0.0 {
        return 0;
    }
    let floor = rel_threshold * max;
    for i in 0..taps.len() {
        let v = taps[i].abs();
        if v < floor {
            continue;
        }
        let left_ok = i == 0 || taps[i - 1].abs() <= v;
        let right_ok = i + 1 >= taps.len() || taps[i + 1].abs() <= v;
        if left_ok && right_ok {
            return i;
        }
    }
    0
}

/// Classical recursive high-pass used after the image sum.
fn highpass_in_place(taps: &mut [f64], fs: f64) {
    let w = 2.0 * PI * HIGHPASS_CUTOFF_HZ / fs;
    let r1 = (-w).exp();
    let b1 = 2.0 * r1 * w.cos();
    let b2 = -r1 * r1;
    let a1 = -(1.0 + r1);
    let mut y = [0.0f64; 3];
    for tap in taps.iter_mut() {
        let x0 = *tap;
        y[2] = y[1];
        y[1] = y[0];
        y[0] = b1 * y[1] + b2 * y[2] + x0;
        *tap = y[0] + a1 * y[1] + r1 * y[2];
    }
}
