//! Mutual information between the disturbance and the cancellation signal.
//!
//! Both signals are cut into time-aligned frames; averaged marginal and joint
//! densities are built on shared grids and the discrete entropies give
//! `I = H(d) + H(y) - H(d, y)`. The captured-information fraction
//! `alpha = I / H(d)` is clamped into `[0, 1 - 1e-6]`.

use dsp_core::{signal_power, Waveform};
use serde::{Deserialize, Serialize};

use crate::entropy::{histogram_entropy_1d, histogram_entropy_2d};
use crate::error::InfoError;
use crate::kde::{kde_pdf_1d, kde_pdf_2d, GridAxis, KdeConfig};

/// Clamp margin keeping `alpha` strictly below 1.
pub const ALPHA_CEIL_EPS: f64 = 1e-6;

/// Entropies (nats), mutual information and the captured-information
/// fraction of one (d, y) pair, plus the side quantities the bound formulas
/// need.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InfoQuantities {
    /// Discrete entropy of the binned disturbance density.
    pub h_d: f64,
    pub h_y: f64,
    pub h_joint: f64,
    /// `H(d) + H(y) - H(d, y)`, clamped to be nonnegative.
    pub mi: f64,
    /// `mi / h_d` clamped into `[0, 1 - 1e-6]`; 0 when `h_d` vanishes.
    pub alpha: f64,
    /// Mean squared value of the disturbance.
    pub d_power: f64,
    /// Grid step of the disturbance axis (bin width).
    pub d_bin_width: f64,
    pub frame_count: usize,
    pub d_degenerate: bool,
    pub y_degenerate: bool,
}

fn frame_starts(len: usize, config: &KdeConfig) -> Vec<usize> {
    let mut starts = Vec::new();
    let mut start = 0;
    while start + config.frame_len <= len {
        starts.push(start);
        start += config.frame_hop;
    }
    starts
}

fn self_information_limit(d: &Waveform, config: &KdeConfig) -> Result<InfoQuantities, InfoError> {
    let starts = frame_starts(d.len(), config);
    let frames: Vec<&[f64]> = starts
        .iter()
        .map(|&s| &d.samples()[s..s + config.frame_len])
        .collect();
    let axis = GridAxis::from_values(d.samples(), config)?;
    let density = kde_pdf_1d(&frames, &axis, axis.bandwidth)?;
    let h_d = histogram_entropy_1d(&density);
    let alpha = if h_d > 0.0 { 1.0 - ALPHA_CEIL_EPS } else { 0.0 };
    Ok(InfoQuantities {
        h_d,
        h_y: h_d,
        h_joint: h_d,
        mi: h_d,
        alpha,
        d_power: signal_power(d)?,
        d_bin_width: axis.step,
        frame_count: starts.len(),
        d_degenerate: axis.degenerate,
        y_degenerate: axis.degenerate,
    })
}

/// Lexicographic total order on sample slices; used to pick a canonical
/// internal argument order so that `mutual_information(d, y)` and
/// `mutual_information(y, d)` perform bit-identical float sums.
fn lex_le(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    a.len() <= b.len()
}

/// Estimate the information quantities of a (d, y) pair.
pub fn mutual_information(
    d: &Waveform,
    y: &Waveform,
    config: &KdeConfig,
) -> Result<InfoQuantities, InfoError> {
    config.validate()?;
    if d.len() != y.len() {
        return Err(InfoError::InvalidArgument(format!(
            "signals must be aligned: {} vs {} samples",
            d.len(),
            y.len()
        )));
    }
    if d.sample_rate_hz() != y.sample_rate_hz() {
        return Err(InfoError::InvalidArgument(format!(
            "sample rate mismatch: {} vs {}",
            d.sample_rate_hz(),
            y.sample_rate_hz()
        )));
    }
    if d.len() < config.frame_len {
        return Err(InfoError::TooShort {
            got: d.len(),
            frame_len: config.frame_len,
        });
    }

    // Identical inputs are the self-information limit. The product-kernel
    // joint cannot represent a distribution concentrated on the diagonal
    // (any positive bandwidth spreads mass off it), so this measure-zero
    // case is resolved exactly instead of estimated.
    if d.samples() == y.samples() {
        return self_information_limit(d, config);
    }

    let d_first = lex_le(d.samples(), y.samples());
    let (first, second) = if d_first { (d, y) } else { (y, d) };

    let starts = frame_starts(d.len(), config);
    let frames_first: Vec<&[f64]> = starts
        .iter()
        .map(|&s| &first.samples()[s..s + config.frame_len])
        .collect();
    let frames_second: Vec<&[f64]> = starts
        .iter()
        .map(|&s| &second.samples()[s..s + config.frame_len])
        .collect();

    let axis_first = GridAxis::from_values(first.samples(), config)?;
    let axis_second = GridAxis::from_values(second.samples(), config)?;
    if axis_first.degenerate {
        log::warn!("first signal has zero variance; using a delta-like density");
    }
    if axis_second.degenerate {
        log::warn!("second signal has zero variance; using a delta-like density");
    }

    let density_first = kde_pdf_1d(&frames_first, &axis_first, axis_first.bandwidth)?;
    let density_second = kde_pdf_1d(&frames_second, &axis_second, axis_second.bandwidth)?;
    let joint = kde_pdf_2d(
        &frames_first,
        &frames_second,
        &axis_first,
        &axis_second,
        axis_first.bandwidth,
        axis_second.bandwidth,
    )?;

    let h_first = histogram_entropy_1d(&density_first);
    let h_second = histogram_entropy_1d(&density_second);
    let h_joint = histogram_entropy_2d(&joint);
    let mi = (h_first + h_second - h_joint).max(0.0);

    let (h_d, h_y) = if d_first {
        (h_first, h_second)
    } else {
        (h_second, h_first)
    };
    let (axis_d, axis_y) = if d_first {
        (&axis_first, &axis_second)
    } else {
        (&axis_second, &axis_first)
    };

    let alpha = if h_d > 0.0 {
        (mi / h_d).clamp(0.0, 1.0 - ALPHA_CEIL_EPS)
    } else {
        0.0
    };

    Ok(InfoQuantities {
        h_d,
        h_y,
        h_joint,
        mi,
        alpha,
        d_power: signal_power(d)?,
        d_bin_width: axis_d.step,
        frame_count: starts.len(),
        d_degenerate: axis_d.degenerate,
        y_degenerate: axis_y.degenerate,
    })
}
