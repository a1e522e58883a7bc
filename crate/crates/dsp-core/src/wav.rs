//! Mono WAV import/export (PCM 16-bit and IEEE float32).
//!
//! Multi-channel files are downmixed by selecting channel 0; the import
//! result records that this happened.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use crate::error::{DspError, Result};
use crate::types::Waveform;

/// A decoded waveform plus provenance of the decoding policy.
#[derive(Debug, Clone)]
pub struct WavImport {
    pub waveform: Waveform,
    /// True when the source had more than one channel and channel 0 was taken.
    pub downmixed: bool,
    pub source_channels: u16,
}

/// Read a WAV file. Supports PCM 16-bit and IEEE float32; other encodings
/// are rejected.
pub fn read_wav(path: &Path) -> Result<WavImport> {
    let mut reader =
        WavReader::open(path).map_err(|e| DspError::Wav(format!("{}: {e}", path.display())))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 {
        return Err(DspError::Wav("zero channels".into()));
    }

    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .step_by(channels)
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| DspError::Wav(e.to_string()))?,
        (SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .step_by(channels)
            .map(|s| s.map(|v| v as f64))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| DspError::Wav(e.to_string()))?,
        (fmt, bits) => {
            return Err(DspError::Wav(format!(
                "unsupported encoding {fmt:?}/{bits}-bit (expected PCM16 or float32)"
            )))
        }
    };

    Ok(WavImport {
        waveform: Waveform::new(samples, spec.sample_rate)?,
        downmixed: channels > 1,
        source_channels: spec.channels,
    })
}

/// Write a mono IEEE float32 WAV.
pub fn write_wav_f32(path: &Path, waveform: &Waveform) -> Result<()> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: waveform.sample_rate_hz(),
        bits_per_sample: 32,
        sample_format: SampleFormat::Float,
    };
    let mut writer =
        WavWriter::create(path, spec).map_err(|e| DspError::Wav(e.to_string()))?;
    for &s in waveform.samples() {
        writer
            .write_sample(s as f32)
            .map_err(|e| DspError::Wav(e.to_string()))?;
    }
    writer.finalize().map_err(|e| DspError::Wav(e.to_string()))
}

/// Write a mono PCM 16-bit WAV; samples are clamped to [-1, 1).
pub fn write_wav_pcm16(path: &Path, waveform: &Waveform) -> Result<()> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: waveform.sample_rate_hz(),
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut writer =
        WavWriter::create(path, spec).map_err(|e| DspError::Wav(e.to_string()))?;
    for &s in waveform.samples() {
        let v = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        writer
            .write_sample(v)
            .map_err(|e| DspError::Wav(e.to_string()))?;
    }
    writer.finalize().map_err(|e| DspError::Wav(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize, fs: u32) -> Waveform {
        let samples: Vec<f64> = (0..n).map(|i| (i as f64 / n as f64) - 0.5).collect();
        Waveform::new(samples, fs).unwrap()
    }

    #[test]
    fn float32_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.wav");
        let w = ramp(256, 16000);
        write_wav_f32(&path, &w).unwrap();
        let imported = read_wav(&path).unwrap();
        assert_eq!(imported.waveform.sample_rate_hz(), 16000);
        assert!(!imported.downmixed);
        for (a, b) in imported.waveform.samples().iter().zip(w.samples()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn pcm16_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.wav");
        let w = ramp(256, 8000);
        write_wav_pcm16(&path, &w).unwrap();
        let imported = read_wav(&path).unwrap();
        for (a, b) in imported.waveform.samples().iter().zip(w.samples()) {
            assert!((a - b).abs() < 1.0 / 32768.0 + 1e-9);
        }
    }

    #[test]
    fn stereo_downmix_takes_channel_zero() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stereo.wav");
        let spec = WavSpec {
            channels: 2,
            sample_rate: 16000,
            bits_per_sample: 32,
            sample_format: SampleFormat::Float,
        };
        let mut writer = WavWriter::create(&path, spec).unwrap();
        for i in 0..64 {
            writer.write_sample(i as f32).unwrap(); // channel 0
            writer.write_sample(-(i as f32)).unwrap(); // channel 1
        }
        writer.finalize().unwrap();

        let imported = read_wav(&path).unwrap();
        assert!(imported.downmixed);
        assert_eq!(imported.source_channels, 2);
        assert_eq!(imported.waveform.len(), 64);
        assert!((imported.waveform.samples()[5] - 5.0).abs() < 1e-6);
    }

    #[test]
    fn unsupported_encoding_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x24.wav");
        let spec = WavSpec {
            channels: 1,
            sample_rate: 16000,
            bits_per_sample: 24,
            sample_format: SampleFormat::Int,
        };
        let mut writer = WavWriter::create(&path, spec).unwrap();
        for i in 0..16 {
            writer.write_sample(i as i32).unwrap();
        }
        writer.finalize().unwrap();
        assert!(matches!(read_wav(&path), Err(DspError::Wav(_))));
    }
}
