//! Image-method room impulse response generation.
//!
//! Produces the primary path (noise source at the reference microphone to the
//! error microphone) and the secondary path (cancellation speaker to the
//! error microphone) for a rectangular room parameterized by T60.

mod config;
mod image;
mod io;
mod paths;

pub use config::{beta_from_t60, RoomConfig, RoomError};
pub use image::{direct_peak_index, generate_rir, generate_rir_with_beta};
pub use io::{
    config_hash, export_rir_json, export_rir_wav, import_rir_json, import_rir_wav, RirJson,
};
pub use paths::{simulate_paths, PathPair, SceneGeometry};
