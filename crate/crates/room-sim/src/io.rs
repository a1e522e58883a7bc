//! RIR export/import as float32 WAV or as a JSON tap array with metadata.

use std::path::Path;

use dsp_core::{wav, ImpulseResponse, Waveform};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{RoomConfig, RoomError};

/// JSON representation of a generated RIR with reproducibility metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RirJson {
    pub sample_rate_hz: u32,
    /// Hash of the generating configuration (empty when unknown).
    pub config_hash: String,
    pub taps: Vec<f64>,
}

/// Hex-encoded SHA-256 prefix of the canonical JSON form of a room config.
pub fn config_hash(config: &RoomConfig) -> String {
    let canonical = serde_json::to_string(config).expect("room config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    hex_prefix(&digest, 16)
}

pub(crate) fn hex_prefix(bytes: &[u8], chars: usize) -> String {
    let mut out = String::with_capacity(chars);
    for b in bytes {
        use std::fmt::Write;
        write!(out, "{b:02x}").unwrap();
        if out.len() >= chars {
            break;
        }
    }
    out.truncate(chars);
    out
}

pub fn export_rir_json(path: &Path, ir: &ImpulseResponse, config_hash: &str) -> Result<(), RoomError> {
    let record = RirJson {
        sample_rate_hz: ir.sample_rate_hz(),
        config_hash: config_hash.to_string(),
        taps: ir.taps().to_vec(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&record)?)?;
    Ok(())
}

pub fn import_rir_json(path: &Path) -> Result<(ImpulseResponse, String), RoomError> {
    let record: RirJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let ir = ImpulseResponse::new(record.taps, record.sample_rate_hz)?;
    Ok((ir, record.config_hash))
}

pub fn export_rir_wav(path: &Path, ir: &ImpulseResponse) -> Result<(), RoomError> {
    let wf = Waveform::new(ir.taps().to_vec(), ir.sample_rate_hz())?;
    wav::write_wav_f32(path, &wf)?;
    Ok(())
}

pub fn import_rir_wav(path: &Path) -> Result<ImpulseResponse, RoomError> {
    let imported = wav::read_wav(path)?;
    let rate = imported.waveform.sample_rate_hz();
    Ok(ImpulseResponse::new(imported.waveform.into_samples(), rate)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate_rir;

    fn sample_config() -> RoomConfig {
        RoomConfig {
            dims_m: [3.0, 4.0, 2.0],
            source_pos_m: [1.5, 2.5, 1.0],
            mic_pos_m: [1.5, 3.0, 1.0],
            t60_s: 0.2,
            n_taps: 512,
            sample_rate_hz: 16000,
            sound_speed_mps: 343.0,
            highpass_enabled: true,
        }
    }

    #[test]
    fn json_roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rir.json");
        let cfg = sample_config();
        let rir = generate_rir(&cfg).unwrap();
        let hash = config_hash(&cfg);
        export_rir_json(&path, &rir, &hash).unwrap();
        let (imported, imported_hash) = import_rir_json(&path).unwrap();
        assert_eq!(imported, rir);
        assert_eq!(imported_hash, hash);
    }

    #[test]
    fn wav_roundtrip_is_close() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rir.wav");
        let rir = generate_rir(&sample_config()).unwrap();
        export_rir_wav(&path, &rir).unwrap();
        let imported = import_rir_wav(&path).unwrap();
        assert_eq!(imported.len(), rir.len());
        for (a, b) in imported.taps().iter().zip(rir.taps()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn config_hash_is_stable_and_sensitive() {
        let cfg = sample_config();
        assert_eq!(config_hash(&cfg), config_hash(&cfg.clone()));
        let mut other = sample_config();
        other.t60_s = 0.25;
        assert_ne!(config_hash(&cfg), config_hash(&other));
    }
}
