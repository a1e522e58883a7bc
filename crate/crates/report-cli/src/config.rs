//! Experiment configuration: a TOML file of flat sections, every key
//! overridable from the CLI.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anc_engine::FxlmsConfig;
use dsp_core::ImpulseResponse;
use info_bound::{EpMode, KdeConfig};
use room_sim::SceneGeometry;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::sweep::ReportError;

/// A noise input: one of the synthetic surrogates or a user WAV file
/// (`wav:<path>` in config files).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum NoiseSpec {
    Synthetic(crate::noise::NoiseKind),
    Wav(PathBuf),
}

impl NoiseSpec {
    /// Row identifier used in reports: the surrogate name or the file stem.
    pub fn id(&self) -> String {
        match self {
            NoiseSpec::Synthetic(kind) => kind.name().to_string(),
            NoiseSpec::Wav(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
        }
    }
}

impl FromStr for NoiseSpec {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(path) = s.strip_prefix("wav:") {
            return Ok(NoiseSpec::Wav(PathBuf::from(path)));
        }
        Ok(NoiseSpec::Synthetic(s.parse()?))
    }
}

impl TryFrom<String> for NoiseSpec {
    type Error = ReportError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<NoiseSpec> for String {
    fn from(spec: NoiseSpec) -> String {
        match spec {
            NoiseSpec::Synthetic(kind) => kind.name().to_string(),
            NoiseSpec::Wav(path) => format!("wav:{}", path.display()),
        }
    }
}

/// A canceller choice: `fxlms`, `null` or `external:<path>` pointing at a
/// WAV with the externally produced cancellation signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CancellerSpec {
    Fxlms,
    Null,
    External(PathBuf),
}

impl CancellerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CancellerSpec::Fxlms => "fxlms",
            CancellerSpec::Null => "null",
            CancellerSpec::External(_) => "external",
        }
    }
}

impl FromStr for CancellerSpec {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fxlms" => Ok(CancellerSpec::Fxlms),
            "null" => Ok(CancellerSpec::Null),
            other => {
                if let Some(path) = other.strip_prefix("external:") {
                    Ok(CancellerSpec::External(PathBuf::from(path)))
                } else {
                    Err(ReportError::Config(format!(
                        "unknown canceller '{other}' (expected fxlms, null or external:<path>)"
                    )))
                }
            }
        }
    }
}

impl TryFrom<String> for CancellerSpec {
    type Error = ReportError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CancellerSpec> for String {
    fn from(spec: CancellerSpec) -> String {
        match spec {
            CancellerSpec::Fxlms => "fxlms".into(),
            CancellerSpec::Null => "null".into(),
            CancellerSpec::External(path) => format!("external:{}", path.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoomSection {
    pub dims_m: [f64; 3],
    pub ref_mic_m: [f64; 3],
    pub err_mic_m: [f64; 3],
    pub speaker_m: [f64; 3],
    pub n_taps: usize,
    pub sound_speed_mps: f64,
    pub highpass_enabled: bool,
}

impl Default for RoomSection {
    fn default() -> Self {
        let geom = SceneGeometry::default();
        Self {
            dims_m: geom.dims_m,
            ref_mic_m: geom.ref_mic_m,
            err_mic_m: geom.err_mic_m,
            speaker_m: geom.speaker_m,
            n_taps: geom.n_taps,
            sound_speed_mps: geom.sound_speed_mps,
            highpass_enabled: geom.highpass_enabled,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FxlmsSection {
    pub filter_len: usize,
    pub step_size: f64,
    pub leak: f64,
    pub normalize: bool,
}

impl Default for FxlmsSection {
    fn default() -> Self {
        Self {
            filter_len: 512,
            step_size: 0.1,
            leak: 0.0,
            normalize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SupportSection {
    pub fft_size: usize,
    pub threshold_db: f64,
}

impl Default for SupportSection {
    fn default() -> Self {
        Self {
            fft_size: 1024,
            threshold_db: 45.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WelchSection {
    pub window_len: usize,
    pub overlap_frac: f64,
}

impl Default for WelchSection {
    fn default() -> Self {
        Self {
            window_len: 1024,
            overlap_frac: 0.5,
        }
    }
}

/// Full experiment description; defaults reproduce the reference setup
/// (3 x 4 x 2 m room, 512-tap RIRs at 16 kHz, 3 s clips, T60 grid
/// 0.15..0.25 s, four synthetic noises, FxLMS and null cancellers).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub sample_rate_hz: u32,
    pub clip_seconds: f64,
    pub t60_list: Vec<f64>,
    pub noise_inputs: Vec<NoiseSpec>,
    pub cancellers: Vec<CancellerSpec>,
    /// Which primary-path energy mode feeds the linear info bound (and the
    /// unified bound): "full" or "direct". Both are always reported.
    pub info_ep_mode: EpMode,
    pub room: RoomSection,
    pub fxlms: FxlmsSection,
    pub kde: KdeConfig,
    pub support: SupportSection,
    pub welch: WelchSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            sample_rate_hz: 16000,
            clip_seconds: 3.0,
            t60_list: vec![0.15, 0.175, 0.2, 0.225, 0.25],
            noise_inputs: vec![
                NoiseSpec::Synthetic(crate::noise::NoiseKind::White),
                NoiseSpec::Synthetic(crate::noise::NoiseKind::BabbleSurrogate),
                NoiseSpec::Synthetic(crate::noise::NoiseKind::EngineSurrogate),
                NoiseSpec::Synthetic(crate::noise::NoiseKind::FactorySurrogate),
            ],
            cancellers: vec![CancellerSpec::Fxlms, CancellerSpec::Null],
            info_ep_mode: EpMode::FullEnergy,
            room: RoomSection::default(),
            fxlms: FxlmsSection::default(),
            kde: KdeConfig::default(),
            support: SupportSection::default(),
            welch: WelchSection::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load_toml(path: &Path) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ReportError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| ReportError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        if self.t60_list.is_empty() || self.t60_list.iter().any(|&t| !(t > 0.0)) {
            return Err(ReportError::Config(
                "t60_list must be non-empty with positive entries".into(),
            ));
        }
        if self.noise_inputs.is_empty() {
            return Err(ReportError::Config("noise_inputs must be non-empty".into()));
        }
        if self.cancellers.is_empty() {
            return Err(ReportError::Config("cancellers must be non-empty".into()));
        }
        if !(self.clip_seconds > 0.0) {
            return Err(ReportError::Config("clip_seconds must be positive".into()));
        }
        self.kde.validate()?;
        Ok(())
    }

    pub fn scene_geometry(&self) -> SceneGeometry {
        SceneGeometry {
            dims_m: self.room.dims_m,
            ref_mic_m: self.room.ref_mic_m,
            err_mic_m: self.room.err_mic_m,
            speaker_m: self.room.speaker_m,
            n_taps: self.room.n_taps,
            sample_rate_hz: self.sample_rate_hz,
            sound_speed_mps: self.room.sound_speed_mps,
            highpass_enabled: self.room.highpass_enabled,
        }
    }

    pub fn fxlms_config(&self, secondary_estimate: ImpulseResponse) -> FxlmsConfig {
        FxlmsConfig {
            filter_len: self.fxlms.filter_len,
            step_size: self.fxlms.step_size,
            leak: self.fxlms.leak,
            secondary_estimate,
            normalize: self.fxlms.normalize,
        }
    }

    pub fn clip_samples(&self) -> usize {
        (self.sample_rate_hz as f64 * self.clip_seconds).round() as usize
    }

    /// SHA-256 prefix of the canonical JSON form.
    pub fn config_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::new();
        for b in digest.iter().take(8) {
            use std::fmt::Write;
            write!(out, "{b:02x}").unwrap();
        }
        out
    }

    /// Deterministic per-row seed derived from the global seed, the noise id
    /// and the reverberation time (canceller-independent so rows sharing a
    /// scenario see the same input realization).
    pub fn row_seed(&self, noise_id: &str, t60_s: f64) -> u64 {
        let mut hasher = Sha256::new();
        hasher.update(self.seed.to_le_bytes());
        hasher.update(noise_id.as_bytes());
        hasher.update(t60_s.to_le_bytes());
        let digest = hasher.finalize();
        u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid_and_matches_reference_setup() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.room.dims_m, [3.0, 4.0, 2.0]);
        assert_eq!(cfg.room.err_mic_m, [1.5, 3.0, 1.0]);
        assert_eq!(cfg.room.ref_mic_m, [1.5, 1.0, 1.0]);
        assert_eq!(cfg.room.speaker_m, [1.5, 2.5, 1.0]);
        assert_eq!(cfg.t60_list, vec![0.15, 0.175, 0.2, 0.225, 0.25]);
        assert_eq!(cfg.clip_samples(), 48000);
        assert_eq!(cfg.room.n_taps, 512);
    }

    #[test]
    fn toml_roundtrip_preserves_config() {
        let cfg = ExperimentConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let parsed: ExperimentConfig = toml::from_str(&text).unwrap();
        assert_eq!(parsed, cfg);
    }

    #[test]
    fn partial_toml_fills_defaults() {
        let parsed: ExperimentConfig = toml::from_str(
            r#"
            seed = 7
            t60_list = [0.2]
            noise_inputs = ["white", "engine_surrogate"]
            cancellers = ["null"]

            [support]
            threshold_db = 30.0
            "#,
        )
        .unwrap();
        assert_eq!(parsed.seed, 7);
        assert_eq!(parsed.t60_list, vec![0.2]);
        assert_eq!(parsed.noise_inputs.len(), 2);
        assert_eq!(parsed.support.threshold_db, 30.0);
        assert_eq!(parsed.support.fft_size, 1024);
        assert_eq!(parsed.room.n_taps, 512);
    }

    #[test]
    fn noise_and_canceller_specs_parse() {
        assert_eq!(
            "wav:/tmp/a.wav".parse::<NoiseSpec>().unwrap(),
            NoiseSpec::Wav(PathBuf::from("/tmp/a.wav"))
        );
        assert_eq!("fxlms".parse::<CancellerSpec>().unwrap(), CancellerSpec::Fxlms);
        assert!(matches!(
            "external:y.wav".parse::<CancellerSpec>().unwrap(),
            CancellerSpec::External(_)
        ));
        assert!("bogus".parse::<CancellerSpec>().is_err());
        assert!("mystery_noise".parse::<NoiseSpec>().is_err());
    }

    #[test]
    fn row_seed_is_stable_and_distinct() {
        let cfg = ExperimentConfig::default();
        let a = cfg.row_seed("white", 0.2);
        assert_eq!(a, cfg.row_seed("white", 0.2));
        assert_ne!(a, cfg.row_seed("white", 0.25));
        assert_ne!(a, cfg.row_seed("engine_surrogate", 0.2));
    }

    #[test]
    fn config_hash_tracks_content() {
        let cfg = ExperimentConfig::default();
        let mut other = cfg.clone();
        assert_eq!(cfg.config_hash(), other.config_hash());
        other.seed = 43;
        assert_ne!(cfg.config_hash(), other.config_hash());
    }
}
