use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RoomError {
    #[error("infeasible room/T60 combination: Sabine absorption {absorption:.4} exceeds 1")]
    InfeasibleT60 { absorption: f64 },

    #[error("{which} position {pos:?} is not strictly inside room {dims:?}")]
    PositionOutsideRoom {
        which: &'static str,
        pos: [f64; 3],
        dims: [f64; 3],
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Dsp(#[from] dsp_core::DspError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Geometry and acoustic parameters for a single source/receiver RIR.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomConfig {
    /// Room dimensions in meters (width, length, height).
    pub dims_m: [f64; 3],
    pub source_pos_m: [f64; 3],
    pub mic_pos_m: [f64; 3],
    /// Reverberation time in seconds.
    pub t60_s: f64,
    /// Output RIR length in taps.
    pub n_taps: usize,
    pub sample_rate_hz: u32,
    pub sound_speed_mps: f64,
    /// Apply the classical recursive high-pass post-filter (100 Hz cutoff).
    pub highpass_enabled: bool,
}

impl RoomConfig {
    pub fn validate(&self) -> Result<(), RoomError> {
        if self.dims_m.iter().any(|&d| !(d > 0.0)) {
            return Err(RoomError::InvalidArgument(format!(
                "room dimensions must be positive, got {:?}",
                self.dims_m
            )));
        }
        if !(self.t60_s > 0.0) {
            return Err(RoomError::InvalidArgument(format!(
                "t60 must be positive, got {}",
                self.t60_s
            )));
        }
        if self.n_taps == 0 {
            return Err(RoomError::InvalidArgument("n_taps must be >= 1".into()));
        }
        if self.sample_rate_hz == 0 {
            return Err(RoomError::InvalidArgument(
                "sample rate must be positive".into(),
            ));
        }
        if !(self.sound_speed_mps > 0.0) {
            return Err(RoomError::InvalidArgument(
                "sound speed must be positive".into(),
            ));
        }
        check_inside("source", &self.source_pos_m, &self.dims_m)?;
        check_inside("microphone", &self.mic_pos_m, &self.dims_m)?;
        if self.source_pos_m == self.mic_pos_m {
            return Err(RoomError::InvalidArgument(
                "source and microphone positions coincide".into(),
            ));
        }
        Ok(())
    }
}

pub(crate) fn check_inside(
    which: &'static str,
    pos: &[f64; 3],
    dims: &[f64; 3],
) -> Result<(), RoomError> {
    for axis in 0..3 {
        if !(pos[axis] > 0.0 && pos[axis] < dims[axis]) {
            return Err(RoomError::PositionOutsideRoom {
                which,
                pos: *pos,
                dims: *dims,
            });
        }
    }
    Ok(())
}

/// Uniform wall reflection coefficient from Sabine's relation:
/// `alpha = 24 V ln(10) / (c S T60)`, `beta = sqrt(1 - alpha)`, with V the
/// room volume and S the total wall surface area.
pub fn beta_from_t60(dims_m: &[f64; 3], t60_s: f64, sound_speed_mps: f64) -> Result<f64, RoomError> {
    if dims_m.iter().any(|&d| !(d > 0.0)) || !(t60_s > 0.0) || !(sound_speed_mps > 0.0) {
        return Err(RoomError::InvalidArgument(
            "dims, t60 and sound speed must be positive".into(),
        ));
    }
    let [w, l, h] = *dims_m;
    let volume = w * l * h;
    let surface = 2.0 * (w * l + w * h + l * h);
    let absorption = 24.0 * volume * std::f64::consts::LN_10 / (sound_speed_mps * surface * t60_s);
    if absorption > 1.0 {
        return Err(RoomError::InfeasibleT60 { absorption });
    }
    Ok((1.0 - absorption).sqrt())
}
