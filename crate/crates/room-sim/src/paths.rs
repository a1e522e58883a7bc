use dsp_core::ImpulseResponse;
use serde::{Deserialize, Serialize};

use crate::config::{check_inside, RoomConfig, RoomError};
use crate::image::generate_rir;

/// Primary and secondary path for one scenario, generated with identical
/// tap counts and sample rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPair {
    /// Reference position to error microphone (produces the disturbance).
    pub primary: ImpulseResponse,
    /// Cancellation speaker to error microphone (filters the anti-signal).
    pub secondary: ImpulseResponse,
}

/// Room geometry and the three transducer positions of the setup.
///
/// The primary path is modeled with the noise source collocated with the
/// reference microphone; this is configurable by moving `ref_mic_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneGeometry {
    pub dims_m: [f64; 3],
    pub ref_mic_m: [f64; 3],
    pub err_mic_m: [f64; 3],
    pub speaker_m: [f64; 3],
    pub n_taps: usize,
    pub sample_rate_hz: u32,
    pub sound_speed_mps: f64,
    pub highpass_enabled: bool,
}

impl Default for SceneGeometry {
    fn default() -> Self {
        Self {
            dims_m: [3.0, 4.0, 2.0],
            ref_mic_m: [1.5, 1.0, 1.0],
            err_mic_m: [1.5, 3.0, 1.0],
            speaker_m: [1.5, 2.5, 1.0],
            n_taps: 512,
            sample_rate_hz: 16000,
            sound_speed_mps: 343.0,
            highpass_enabled: true,
        }
    }
}

impl SceneGeometry {
    pub fn room_config(&self, source: [f64; 3], mic: [f64; 3], t60_s: f64) -> RoomConfig {
        RoomConfig {
            dims_m: self.dims_m,
            source_pos_m: source,
            mic_pos_m: mic,
            t60_s,
            n_taps: self.n_taps,
            sample_rate_hz: self.sample_rate_hz,
            sound_speed_mps: self.sound_speed_mps,
            highpass_enabled: self.highpass_enabled,
        }
    }
}

/// Generate the primary (reference -> error) and secondary (speaker -> error)
/// RIRs for one reverberation time.
pub fn simulate_paths(geometry: &SceneGeometry, t60_s: f64) -> Result<PathPair, RoomError> {
    check_inside("reference microphone", &geometry.ref_mic_m, &geometry.dims_m)?;
    check_inside("error microphone", &geometry.err_mic_m, &geometry.dims_m)?;
    check_inside("speaker", &geometry.speaker_m, &geometry.dims_m)?;

    let primary = generate_rir(&geometry.room_config(geometry.ref_mic_m, geometry.err_mic_m, t60_s))?;
    let secondary =
        generate_rir(&geometry.room_config(geometry.speaker_m, geometry.err_mic_m, t60_s))?;
    Ok(PathPair { primary, secondary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn peak_index(ir: &ImpulseResponse) -> usize {
        crate::image::direct_peak_index(ir, 0.3)
    }

    #[test]
    fn secondary_direct_delay_precedes_primary() {
        // Speaker is 0.5 m from the error mic, reference is 2.0 m away.
        let paths = simulate_paths(&SceneGeometry::default(), 0.2).unwrap();
        assert_eq!(paths.primary.len(), paths.secondary.len());
        assert_eq!(
            paths.primary.sample_rate_hz(),
            paths.secondary.sample_rate_hz()
        );
        assert!(peak_index(&paths.secondary) < peak_index(&paths.primary));
    }

    #[test]
    fn swapping_speaker_and_reference_swaps_delays() {
        let geom = SceneGeometry::default();
        let mut swapped = geom.clone();
        std::mem::swap(&mut swapped.ref_mic_m, &mut swapped.speaker_m);

        let a = simulate_paths(&geom, 0.2).unwrap();
        let b = simulate_paths(&swapped, 0.2).unwrap();
        assert_eq!(peak_index(&a.primary), peak_index(&b.secondary));
        assert_eq!(peak_index(&a.secondary), peak_index(&b.primary));
    }

    #[test]
    fn speaker_outside_room_rejected() {
        let mut geom = SceneGeometry::default();
        geom.speaker_m = [3.5, 2.5, 1.0];
        assert!(matches!(
            simulate_paths(&geom, 0.2),
            Err(RoomError::PositionOutsideRoom { .. })
        ));
    }
}
