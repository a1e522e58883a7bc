use std::path::Path;

use dsp_core::{resample, wav, Waveform};

use crate::error::AncError;

/// An externally produced cancellation waveform plus how it was adapted.
#[derive(Debug, Clone)]
pub struct IngestedY {
    pub waveform: Waveform,
    /// Set when the file's rate differed and the signal was resampled.
    pub resampled: bool,
    /// Set when a multi-channel file was reduced to channel 0.
    pub downmixed: bool,
}

/// Load a WAV file as a cancellation signal, resampling to `expected_rate_hz`
/// if needed. The sample count after resampling must match `expected_len`
/// exactly; anything else is an ingestion error (padding someone else's
/// output would silently misalign the evaluation).
pub fn ingest_external_y(
    path: &Path,
    expected_rate_hz: u32,
    expected_len: usize,
) -> Result<IngestedY, AncError> {
    let imported = wav::read_wav(path).map_err(|e| AncError::Ingestion {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;

    let resampled = imported.waveform.sample_rate_hz() != expected_rate_hz;
    let waveform = if resampled {
        resample(&imported.waveform, expected_rate_hz).map_err(|e| AncError::Ingestion {
            path: path.to_path_buf(),
            reason: format!("resampling failed: {e}"),
        })?
    } else {
        imported.waveform
    };

    if waveform.len() != expected_len {
        return Err(AncError::Ingestion {
            path: path.to_path_buf(),
            reason: format!(
                "expected {expected_len} samples at {expected_rate_hz} Hz, got {} \
                 (source: {} ch, resampled: {resampled})",
                waveform.len(),
                imported.source_channels
            ),
        });
    }

    Ok(IngestedY {
        waveform,
        resampled,
        downmixed: imported.downmixed,
    })
}
