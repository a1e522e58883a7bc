use dsp_core::{DbValue, PsdEstimate};
use room_sim::PathPair;
use serde::{Deserialize, Serialize};

use crate::error::SupportError;
use crate::support::{spectral_support, SupportSet};

/// Support-bound ratios and their dB forms.
///
/// `ratio_weighted` weights uncancelable bins by the disturbance spectrum
/// (`S_dd = |P|^2 S_xx` when the reference PSD is available); the bin-count
/// form counts bins only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportBoundResult {
    pub ratio_weighted: f64,
    pub ratio_bincount: f64,
    pub bound_db_weighted: DbValue,
    pub bound_db_bincount: DbValue,
    pub uncancelable_bins: usize,
    /// True when no reference PSD was supplied and the weighting fell back
    /// to `|P|^2` alone.
    pub weighted_by_primary_only: bool,
}

/// Combine two support sets into the uncancelable-fraction ratios.
///
/// `sdd` is the disturbance spectral density sampled on the same one-sided
/// bins; when absent, `|P|^2` is used as the weight and the result is
/// flagged.
pub fn support_ratio(
    p_sup: &SupportSet,
    s_sup: &SupportSet,
    sdd: Option<&[f64]>,
) -> Result<SupportBoundResult, SupportError> {
    if p_sup.fft_size != s_sup.fft_size {
        return Err(SupportError::InvalidArgument(format!(
            "fft sizes differ: {} vs {}",
            p_sup.fft_size, s_sup.fft_size
        )));
    }
    let bins = p_sup.bins();
    if let Some(w) = sdd {
        if w.len() != bins {
            return Err(SupportError::InvalidArgument(format!(
                "disturbance spectrum has {} bins, support masks have {bins}",
                w.len()
            )));
        }
    }
    let p_count = p_sup.support_count();
    if p_count == 0 {
        return Err(SupportError::UndefinedRatio(
            "primary path has empty spectral support",
        ));
    }

    let weighted_by_primary_only = sdd.is_none();
    let weight = |i: usize| -> f64 {
        match sdd {
            Some(w) => w[i],
            None => p_sup.magnitude[i] * p_sup.magnitude[i],
        }
    };

    let mut unc_bins = 0usize;
    let mut unc_weight = 0.0f64;
    let mut supp_weight = 0.0f64;
    for i in 0..bins {
        if !p_sup.mask[i] {
            continue;
        }
        let w = weight(i);
        supp_weight += w;
        if !s_sup.mask[i] {
            unc_bins += 1;
            unc_weight += w;
        }
    }
    if !(supp_weight > 0.0) {
        return Err(SupportError::UndefinedRatio(
            "disturbance weight vanishes over the primary support",
        ));
    }

    let ratio_weighted = unc_weight / supp_weight;
    let ratio_bincount = unc_bins as f64 / p_count as f64;
    Ok(SupportBoundResult {
        ratio_weighted,
        ratio_bincount,
        bound_db_weighted: DbValue::from_ratio(ratio_weighted),
        bound_db_bincount: DbValue::from_ratio(ratio_bincount),
        uncancelable_bins: unc_bins,
        weighted_by_primary_only,
    })
}

/// The support bound of a path pair, weighting by `S_dd = |P|^2 S_xx` with
/// the reference PSD interpolated onto the FFT bins.
pub fn support_bound_db(
    paths: &PathPair,
    x_psd: &PsdEstimate,
    fft_size: usize,
    threshold_db: f64,
) -> Result<SupportBoundResult, SupportError> {
    let p_sup = spectral_support(&paths.primary, fft_size, threshold_db)?;
    let s_sup = spectral_support(&paths.secondary, fft_size, threshold_db)?;
    let fs = paths.primary.sample_rate_hz() as f64;
    let sdd: Vec<f64> = p_sup
        .magnitude
        .iter()
        .enumerate()
        .map(|(i, &mag)| {
            let freq = i as f64 * fs / fft_size as f64;
            mag * mag * x_psd.density_at(freq)
        })
        .collect();
    support_ratio(&p_sup, &s_sup, Some(&sdd))
}

/// CSV export of the two masks: `freq_hz,in_supp_p,in_supp_s,uncancelable`.
pub fn support_masks_csv(p_sup: &SupportSet, s_sup: &SupportSet, sample_rate_hz: u32) -> String {
    let mut out = String::from("freq_hz,in_supp_p,in_supp_s,uncancelable\n");
    let fs = sample_rate_hz as f64;
    for i in 0..p_sup.bins() {
        let freq = i as f64 * fs / p_sup.fft_size as f64;
        let p = p_sup.mask[i];
        let s = s_sup.mask.get(i).copied().unwrap_or(false);
        out.push_str(&format!("{freq},{p},{s},{}\n", p && !s));
    }
    out
}
