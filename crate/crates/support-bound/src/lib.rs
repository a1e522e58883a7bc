//! Support-based cancellation bound.
//!
//! The spectral support of a path is the set of FFT bins whose magnitude
//! stays within a threshold of that spectrum's own peak. Disturbance power
//! falling where the primary path has support but the secondary does not is
//! structurally uncancelable; its fraction of the in-support disturbance
//! power lower-bounds the NMSE independently of the algorithm.

mod bound;
mod error;
mod support;

pub use bound::{support_bound_db, support_masks_csv, support_ratio, SupportBoundResult};
pub use error::SupportError;
pub use support::{spectral_support, SupportSet};
