use std::collections::BTreeMap;
use std::path::Path;

use dsp_core::{fft_convolve, wav, Waveform};
use room_sim::PathPair;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::AncError;
use crate::fxlms::{run_fxlms, FxlmsConfig};

/// Loudspeaker transfer model; only the linear (identity) case is supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LoudspeakerModel {
    Linear,
}

/// Strategy producing the cancellation signal.
#[derive(Debug, Clone)]
pub enum Canceller {
    /// y = 0: no cancellation, e = d.
    Null,
    /// Adaptive FxLMS driven by the in-loop error.
    Fxlms(FxlmsConfig),
    /// Externally produced y (e.g. a third-party model's output).
    External(Waveform),
}

impl Canceller {
    pub fn name(&self) -> &'static str {
        match self {
            Canceller::Null => "null",
            Canceller::Fxlms(_) => "fxlms",
            Canceller::External(_) => "external",
        }
    }
}

/// One complete feedforward run: aligned x, d, y, a, e.
#[derive(Debug, Clone, PartialEq)]
pub struct AncRun {
    pub x: Waveform,
    pub d: Waveform,
    pub y: Waveform,
    pub a: Waveform,
    pub e: Waveform,
    pub loudspeaker: LoudspeakerModel,
}

/// Run the full signal chain for one canceller strategy.
///
/// `d = P * x`, `y` from the canceller (causal), `a = S * y`, `e = d - a`,
/// every signal truncated to the length of `x`.
pub fn run_pipeline(
    x: &Waveform,
    paths: &PathPair,
    canceller: &Canceller,
) -> Result<AncRun, AncError> {
    if x.is_empty() {
        return Err(AncError::InvalidArgument("empty input signal".into()));
    }
    if paths.primary.sample_rate_hz() != paths.secondary.sample_rate_hz() {
        return Err(AncError::Dsp(dsp_core::DspError::SampleRateMismatch {
            left: paths.primary.sample_rate_hz(),
            right: paths.secondary.sample_rate_hz(),
        }));
    }

    let d = fft_convolve(x, &paths.primary)?;

    let y = match canceller {
        Canceller::Null => Waveform::zeros(x.len(), x.sample_rate_hz())?,
        Canceller::Fxlms(config) => run_fxlms(x, &d, config, &paths.secondary)?,
        Canceller::External(provided) => {
            if provided.sample_rate_hz() != x.sample_rate_hz() {
                return Err(AncError::Dsp(dsp_core::DspError::SampleRateMismatch {
                    left: provided.sample_rate_hz(),
                    right: x.sample_rate_hz(),
                }));
            }
            if provided.len() != x.len() {
                return Err(AncError::CancellerOutputMismatch {
                    expected: x.len(),
                    got: provided.len(),
                });
            }
            provided.clone()
        }
    };
    if y.len() != x.len() {
        return Err(AncError::CancellerOutputMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }

    let a = fft_convolve(&y, &paths.secondary)?;
    let e: Vec<f64> = d
        .samples()
        .iter()
        .zip(a.samples())
        .map(|(dv, av)| dv - av)
        .collect();
    let e = Waveform::new(e, x.sample_rate_hz())?;

    Ok(AncRun {
        x: x.clone(),
        d,
        y,
        a,
        e,
        loudspeaker: LoudspeakerModel::Linear,
    })
}

/// Reproducibility sidecar written next to exported run waveforms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub sample_rate_hz: u32,
    pub num_samples: usize,
    pub canceller: String,
    pub seed: Option<u64>,
    pub config_hash: Option<String>,
    /// SHA-256 of each exported WAV file's bytes, keyed by file name.
    pub wav_sha256: BTreeMap<String, String>,
}

/// Write x/d/y/e as float32 WAVs plus a JSON manifest into `dir`.
pub fn export_run(
    dir: &Path,
    run: &AncRun,
    canceller: &str,
    seed: Option<u64>,
    config_hash: Option<String>,
) -> Result<RunManifest, AncError> {
    std::fs::create_dir_all(dir)?;
    let files: [(&str, &Waveform); 4] = [
        ("x.wav", &run.x),
        ("d.wav", &run.d),
        ("y.wav", &run.y),
        ("e.wav", &run.e),
    ];
    let mut hashes = BTreeMap::new();
    for (name, waveform) in files {
        let path = dir.join(name);
        wav::write_wav_f32(&path, waveform)?;
        let bytes = std::fs::read(&path)?;
        hashes.insert(name.to_string(), format!("{:x}", Sha256::digest(&bytes)));
    }
    let manifest = RunManifest {
        sample_rate_hz: run.x.sample_rate_hz(),
        num_samples: run.x.len(),
        canceller: canceller.to_string(),
        seed,
        config_hash,
        wav_sha256: hashes,
    };
    std::fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(manifest)
}
