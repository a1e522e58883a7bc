//! Cancellation-signal generation and the feedforward ANC signal chain.
//!
//! The chain is: disturbance `d = P * x`, anti-signal `a = S * y`, residual
//! `e = d - a`, with the loudspeaker treated as an identity mapping (linear
//! case). `y` comes from a classical FxLMS adaptive canceller, a null
//! canceller, or an externally supplied waveform.

mod error;
mod fxlms;
mod ingest;
mod pipeline;

pub use error::AncError;
pub use fxlms::{run_fxlms, FxlmsConfig};
pub use ingest::{ingest_external_y, IngestedY};
pub use pipeline::{export_run, run_pipeline, AncRun, Canceller, LoudspeakerModel, RunManifest};
