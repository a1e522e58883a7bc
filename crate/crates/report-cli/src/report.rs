//! Report output: a fixed-schema CSV for plotting and a JSON mirror carrying
//! the full per-row detail plus the run manifest.
//!
//! CSV columns, in order: noise_id, t60_s, canceller, nmse_db,
//! info_bound_lin_db, info_bound_exp_db, info_ep_mode,
//! support_bound_weighted_db, support_bound_bincount_db, unified_bound_db,
//! bound_holds, seed, config_hash. Timestamps appear only in the JSON
//! manifest so CSV output is byte-reproducible.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::sweep::{BoundReport, ReportError, SweepOutcome};

const CSV_HEADER: [&str; 13] = [
    "noise_id",
    "t60_s",
    "canceller",
    "nmse_db",
    "info_bound_lin_db",
    "info_bound_exp_db",
    "info_ep_mode",
    "support_bound_weighted_db",
    "support_bound_bincount_db",
    "unified_bound_db",
    "bound_holds",
    "seed",
    "config_hash",
];

/// The flat CSV row; field order defines the column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub noise_id: String,
    pub t60_s: f64,
    pub canceller: String,
    pub nmse_db: f64,
    pub info_bound_lin_db: f64,
    pub info_bound_exp_db: f64,
    pub info_ep_mode: String,
    pub support_bound_weighted_db: f64,
    pub support_bound_bincount_db: f64,
    pub unified_bound_db: f64,
    pub bound_holds: bool,
    pub seed: u64,
    pub config_hash: String,
}

impl From<&BoundReport> for CsvRow {
    fn from(row: &BoundReport) -> Self {
        CsvRow {
            noise_id: row.noise_id.clone(),
            t60_s: row.t60_s,
            canceller: row.canceller.clone(),
            nmse_db: row.nmse_db.db,
            info_bound_lin_db: row.info_bound_lin_selected().db,
            info_bound_exp_db: row.info_bound_exp_db.db,
            info_ep_mode: row.info_ep_mode.clone(),
            support_bound_weighted_db: row.support_bound_weighted_db.db,
            support_bound_bincount_db: row.support_bound_bincount_db.db,
            unified_bound_db: row.unified_bound_db.db,
            bound_holds: row.bound_holds,
            seed: row.seed,
            config_hash: row.config_hash.clone(),
        }
    }
}

/// Write the CSV report (header always present, even with no rows).
pub fn write_csv<W: Write>(rows: &[BoundReport], writer: W) -> Result<(), ReportError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.serialize(CsvRow::from(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[BoundReport]) -> Result<String, ReportError> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Parse a report CSV back into rows (used for round-trip checks and the
/// `report` subcommand).
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>, ReportError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        rows.push(record?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonManifest {
    pub config: ExperimentConfig,
    pub config_hash: String,
    /// Wall-clock creation time; deliberately confined to the manifest.
    pub created_unix_s: u64,
    pub tool: String,
}

/// JSON mirror of the report: manifest plus full rows and row errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JsonReport {
    pub manifest: JsonManifest,
    pub rows: Vec<BoundReport>,
    pub errors: Vec<crate::sweep::RowError>,
}

pub fn write_json_report(
    path: &Path,
    config: &ExperimentConfig,
    outcome: &SweepOutcome,
) -> Result<(), ReportError> {
    let report = JsonReport {
        manifest: JsonManifest {
            config: config.clone(),
            config_hash: config.config_hash(),
            created_unix_s: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tool: format!("anc-bound {}", env!("CARGO_PKG_VERSION")),
        },
        rows: outcome.rows.clone(),
        errors: outcome.errors.clone(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    Ok(())
}

pub fn read_json_report(path: &Path) -> Result<JsonReport, ReportError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}
