//! The information-theoretic lower bound on NMSE in dB.

use dsp_core::{DbValue, ImpulseResponse};
use serde::{Deserialize, Serialize};

use crate::mi::{InfoQuantities, ALPHA_CEIL_EPS};

/// Which primary-path energy term enters the linear bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EpMode {
    /// Full impulse response energy.
    #[serde(rename = "full")]
    FullEnergy,
    /// Energy of the taps within +-2 samples of the direct-path peak.
    #[serde(rename = "direct")]
    DirectPath,
}

impl EpMode {
    pub fn name(&self) -> &'static str {
        match self {
            EpMode::FullEnergy => "full",
            EpMode::DirectPath => "direct",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfoBoundVariant {
    /// `10 log10(1 - alpha) + 10 log10(E_P)`.
    Linear,
    /// Distortion form `D >= exp(2(H - I)) / (2 pi e)`, reported as
    /// `10 log10(D / sigma_d^2)`. Uses the bin-width-corrected entropy
    /// `H = h_d + ln(bin_width)` so the exponent is on the differential
    /// scale the distortion form requires.
    Exponential,
}

/// Primary-path energy term for the linear bound.
pub fn path_energy(primary: &ImpulseResponse, mode: EpMode) -> f64 {
    match mode {
        EpMode::FullEnergy => primary.energy(),
        EpMode::DirectPath => {
            let taps = primary.taps();
            let peak = taps
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
                .map(|(i, _)| i)
                .unwrap_or(0);
            let lo = peak.saturating_sub(2);
            let hi = (peak + 2).min(taps.len() - 1);
            taps[lo..=hi].iter().map(|t| t * t).sum()
        }
    }
}

/// Information-theoretic NMSE lower bound in dB.
///
/// When `alpha` sits at its clamp ceiling the linear form would be `-inf`;
/// the configured display floor is returned with its flag set instead.
pub fn info_bound_db(
    info: &InfoQuantities,
    primary: &ImpulseResponse,
    variant: InfoBoundVariant,
    ep_mode: EpMode,
) -> DbValue {
    match variant {
        InfoBoundVariant::Linear => {
            if info.alpha >= 1.0 - ALPHA_CEIL_EPS {
                return DbValue::floor();
            }
            let ep = path_energy(primary, ep_mode);
            if !(ep > 0.0) {
                return DbValue::floor();
            }
            DbValue::from_db(10.0 * (1.0 - info.alpha).log10() + 10.0 * ep.log10())
        }
        InfoBoundVariant::Exponential => {
            if !(info.d_power > 0.0) || info.d_degenerate {
                return DbValue::floor();
            }
            let h_diff = info.h_d + info.d_bin_width.ln();
            let two_pi_e = 2.0 * std::f64::consts::PI * std::f64::consts::E;
            let distortion = (2.0 * (h_diff - info.mi)).exp() / two_pi_e;
            DbValue::from_ratio(distortion / info.d_power)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quantities(alpha: f64) -> InfoQuantities {
        InfoQuantities {
            h_d: 4.0,
            h_y: 4.0,
            h_joint: 8.0 - alpha * 4.0,
            mi: alpha * 4.0,
            alpha,
            d_power: 1.0,
            d_bin_width: 0.1,
            frame_count: 1,
            d_degenerate: false,
            y_degenerate: false,
        }
    }

    fn unit_primary() -> ImpulseResponse {
        ImpulseResponse::new(vec![1.0], 16000).unwrap()
    }

    #[test]
    fn zero_alpha_unit_path_gives_zero_db() {
        let v = info_bound_db(
            &quantities(0.0),
            &unit_primary(),
            InfoBoundVariant::Linear,
            EpMode::FullEnergy,
        );
        assert!(v.db.abs() < 1e-12);
        assert!(!v.floored);
    }

    #[test]
    fn alpha_point_nine_gives_minus_ten_db() {
        let v = info_bound_db(
            &quantities(0.9),
            &unit_primary(),
            InfoBoundVariant::Linear,
            EpMode::FullEnergy,
        );
        assert!((v.db + 10.0).abs() < 1e-9, "bound {}", v.db);
    }

    #[test]
    fn half_alpha_quarter_energy_combines_terms() {
        let primary = ImpulseResponse::new(vec![0.5], 16000).unwrap();
        let v = info_bound_db(
            &quantities(0.5),
            &primary,
            InfoBoundVariant::Linear,
            EpMode::FullEnergy,
        );
        // 10 log10(0.5) + 10 log10(0.25) ~= -9.03 dB
        assert!((v.db + 9.0309).abs() < 1e-3, "bound {}", v.db);
    }

    #[test]
    fn ceiling_alpha_returns_floor_flag() {
        let v = info_bound_db(
            &quantities(1.0 - ALPHA_CEIL_EPS),
            &unit_primary(),
            InfoBoundVariant::Linear,
            EpMode::FullEnergy,
        );
        assert!(v.floored);
        assert_eq!(v.db, dsp_core::DB_FLOOR_DB);
    }

    #[test]
    fn direct_path_mode_ignores_late_energy() {
        let mut taps = vec![0.0; 64];
        taps[10] = 1.0;
        taps[11] = 0.5;
        taps[40] = 2.0; // outside +-2 of the peak at 40? no: peak IS 40.
        let ir = ImpulseResponse::new(taps, 16000).unwrap();
        // Peak is at index 40 (|2.0|): window covers 38..=42 -> energy 4.0.
        assert!((path_energy(&ir, EpMode::DirectPath) - 4.0).abs() < 1e-12);
        assert!((path_energy(&ir, EpMode::FullEnergy) - 5.25).abs() < 1e-12);
    }

    #[test]
    fn exponential_variant_is_gaussian_consistent() {
        // For a near-Gaussian binned entropy, h_d + ln(step) ~= 0.5 ln(2 pi e
        // sigma^2); with sigma^2 = d_power the exponential bound reduces to
        // -2 mi nats, i.e. 10 log10(exp(-2 mi)).
        let sigma2: f64 = 1.0;
        let step: f64 = 0.1;
        let mi = 0.5;
        let h_diff = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E * sigma2).ln();
        let info = InfoQuantities {
            h_d: h_diff - step.ln(),
            h_y: 0.0,
            h_joint: 0.0,
            mi,
            alpha: 0.1,
            d_power: sigma2,
            d_bin_width: step,
            frame_count: 1,
            d_degenerate: false,
            y_degenerate: false,
        };
        let v = info_bound_db(
            &info,
            &unit_primary(),
            InfoBoundVariant::Exponential,
            EpMode::FullEnergy,
        );
        let expected = 10.0 * (-2.0 * mi).exp().log10();
        assert!((v.db - expected).abs() < 1e-9, "{} vs {expected}", v.db);
    }
}
