//! Experiment orchestration for the ANC bound toolkit: configuration,
//! synthetic noise generation, the NMSE metric, the unified bound, T60
//! sweeps and CSV/JSON report output.

pub mod config;
pub mod metrics;
pub mod noise;
pub mod report;
pub mod sweep;

pub use config::{CancellerSpec, ExperimentConfig, NoiseSpec};
pub use metrics::{nmse_db, unified_bound_db};
pub use noise::{synth_noise, NoiseKind};
pub use report::{csv_string, read_json_report, write_csv, write_json_report, JsonReport};
pub use sweep::{run_sweep, BoundReport, ReportError, RowError, SweepOutcome};
