//! The (noise x T60 x canceller) sweep: simulate paths, run the canceller,
//! measure NMSE, evaluate every bound variant and check that the unified
//! bound holds.

use anc_engine::{ingest_external_y, run_pipeline, AncError, Canceller};
use dsp_core::{standardize, welch_psd, DbValue, DspError, Waveform};
use info_bound::{
    info_bound_db, mutual_information, EpMode, InfoBoundVariant, InfoError, InfoQuantities,
};
use room_sim::{simulate_paths, PathPair, RoomError};
use serde::{Deserialize, Serialize};
use support_bound::{support_bound_db, SupportBoundResult, SupportError};
use thiserror::Error;

use crate::config::{CancellerSpec, ExperimentConfig, NoiseSpec};
use crate::metrics::{nmse_db, unified_bound_db};
use crate::noise::synth_noise;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("configuration: {0}")]
    Config(String),

    #[error("undefined metric: {0}")]
    UndefinedMetric(&'static str),

    #[error(transparent)]
    Dsp(#[from] DspError),

    #[error(transparent)]
    Room(#[from] RoomError),

    #[error(transparent)]
    Anc(#[from] AncError),

    #[error(transparent)]
    Info(#[from] InfoError),

    #[error(transparent)]
    Support(#[from] SupportError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// One sweep row: the measured NMSE, every bound variant and the unified
/// bound verdict for a (noise, T60, canceller) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub noise_id: String,
    pub t60_s: f64,
    pub canceller: String,
    pub nmse_db: DbValue,
    /// Linear info bound with the full primary-path energy term.
    pub info_bound_lin_full_db: DbValue,
    /// Linear info bound with the direct-path-only energy term.
    pub info_bound_lin_direct_db: DbValue,
    /// Linear info bound without any path-energy term (`10 log10(1-alpha)`).
    pub info_bound_lin_noep_db: DbValue,
    /// Exponential (distortion-form) info bound.
    pub info_bound_exp_db: DbValue,
    /// Which energy mode feeds the CSV column and the unified bound.
    pub info_ep_mode: String,
    pub support_bound_weighted_db: DbValue,
    pub support_bound_bincount_db: DbValue,
    pub unified_bound_db: DbValue,
    pub bound_holds: bool,
    /// Per-row derived seed.
    pub seed: u64,
    pub config_hash: String,
    /// Estimated information quantities behind the info bounds.
    pub info: InfoQuantities,
}

impl BoundReport {
    /// The linear info bound selected by `info_ep_mode`.
    pub fn info_bound_lin_selected(&self) -> DbValue {
        if self.info_ep_mode == "direct" {
            self.info_bound_lin_direct_db
        } else {
            self.info_bound_lin_full_db
        }
    }
}

/// A row that could not be computed; the sweep continues past it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowError {
    pub noise_id: String,
    pub t60_s: f64,
    pub canceller: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub rows: Vec<BoundReport>,
    pub errors: Vec<RowError>,
}

impl SweepOutcome {
    pub fn all_bounds_hold(&self) -> bool {
        self.rows.iter().all(|r| r.bound_holds)
    }
}

/// Materialize one noise input (used by the sweep and the CLI export path).
pub fn load_noise(
    spec: &NoiseSpec,
    config: &ExperimentConfig,
    row_seed: u64,
) -> Result<Waveform, ReportError> {
    match spec {
        NoiseSpec::Synthetic(kind) => synth_noise(
            *kind,
            config.clip_seconds,
            config.sample_rate_hz,
            row_seed,
        ),
        NoiseSpec::Wav(path) => {
            let imported = dsp_core::wav::read_wav(path)?;
            if imported.downmixed {
                log::warn!(
                    "{}: {} channels, using channel 0",
                    path.display(),
                    imported.source_channels
                );
            }
            Ok(standardize(
                &imported.waveform,
                config.sample_rate_hz,
                config.clip_seconds,
            )?)
        }
    }
}

/// Build the canceller for one cell (used by the sweep and the CLI export path).
pub fn build_canceller(
    spec: &CancellerSpec,
    config: &ExperimentConfig,
    paths: &PathPair,
) -> Result<Canceller, ReportError> {
    Ok(match spec {
        CancellerSpec::Null => Canceller::Null,
        // The secondary-path estimate defaults to the true simulated path.
        CancellerSpec::Fxlms => {
            Canceller::Fxlms(config.fxlms_config(paths.secondary.clone()))
        }
        CancellerSpec::External(path) => {
            let ingested =
                ingest_external_y(path, config.sample_rate_hz, config.clip_samples())?;
            if ingested.resampled {
                log::warn!("{}: resampled to {} Hz", path.display(), config.sample_rate_hz);
            }
            Canceller::External(ingested.waveform)
        }
    })
}

/// Compute one sweep cell given the shared per-(noise, t60) artifacts.
#[allow(clippy::too_many_arguments)]
fn compute_row(
    config: &ExperimentConfig,
    noise_id: &str,
    t60_s: f64,
    row_seed: u64,
    config_hash: &str,
    x: &Waveform,
    paths: &PathPair,
    support: &SupportBoundResult,
    canceller_spec: &CancellerSpec,
) -> Result<BoundReport, ReportError> {
    let canceller = build_canceller(canceller_spec, config, paths)?;
    let run = run_pipeline(x, paths, &canceller)?;

    let nmse = nmse_db(&run.e, &run.d)?;
    let info = mutual_information(&run.d, &run.y, &config.kde)?;

    let lin_full = info_bound_db(
        &info,
        &paths.primary,
        InfoBoundVariant::Linear,
        EpMode::FullEnergy,
    );
    let lin_direct = info_bound_db(
        &info,
        &paths.primary,
        InfoBoundVariant::Linear,
        EpMode::DirectPath,
    );
    let lin_noep = if info.alpha >= 1.0 - info_bound::ALPHA_CEIL_EPS {
        DbValue::floor()
    } else {
        DbValue::from_db(10.0 * (1.0 - info.alpha).log10())
    };
    let exp = info_bound_db(
        &info,
        &paths.primary,
        InfoBoundVariant::Exponential,
        config.info_ep_mode,
    );

    let selected = match config.info_ep_mode {
        EpMode::FullEnergy => lin_full,
        EpMode::DirectPath => lin_direct,
    };
    let unified = unified_bound_db(selected, support.bound_db_weighted);

    Ok(BoundReport {
        noise_id: noise_id.to_string(),
        t60_s,
        canceller: canceller_spec.name().to_string(),
        nmse_db: nmse,
        info_bound_lin_full_db: lin_full,
        info_bound_lin_direct_db: lin_direct,
        info_bound_lin_noep_db: lin_noep,
        info_bound_exp_db: exp,
        info_ep_mode: config.info_ep_mode.name().to_string(),
        support_bound_weighted_db: support.bound_db_weighted,
        support_bound_bincount_db: support.bound_db_bincount,
        unified_bound_db: unified,
        bound_holds: nmse.db >= unified.db,
        seed: row_seed,
        config_hash: config_hash.to_string(),
        info,
    })
}

/// Run the full sweep in deterministic (noise, t60, canceller) order.
///
/// Row-level failures (unreadable inputs, divergence, estimation errors) are
/// recorded and the sweep continues; an infeasible room configuration aborts
/// the sweep since no row could succeed.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutcome, ReportError> {
    config.validate()?;
    let geometry = config.scene_geometry();
    let config_hash = config.config_hash();

    let mut rows = Vec::new();
    let mut errors = Vec::new();

    for noise_spec in &config.noise_inputs {
        let noise_id = noise_spec.id();
        for &t60_s in &config.t60_list {
            // Infeasible geometry/T60 is fatal for the whole sweep.
            let paths = simulate_paths(&geometry, t60_s)?;

            let row_seed = config.row_seed(&noise_id, t60_s);
            let shared = (|| -> Result<(Waveform, SupportBoundResult), ReportError> {
                let x = load_noise(noise_spec, config, row_seed)?;
                let x_psd = welch_psd(&x, config.welch.window_len, config.welch.overlap_frac)?;
                let support = support_bound_db(
                    &paths,
                    &x_psd,
                    config.support.fft_size,
                    config.support.threshold_db,
                )?;
                Ok((x, support))
            })();

            let (x, support) = match shared {
                Ok(pair) => pair,
                Err(e) => {
                    for canceller in &config.cancellers {
                        errors.push(RowError {
                            noise_id: noise_id.clone(),
                            t60_s,
                            canceller: canceller.name().to_string(),
                            message: e.to_string(),
                        });
                    }
                    continue;
                }
            };

            for canceller_spec in &config.cancellers {
                match compute_row(
                    config,
                    &noise_id,
                    t60_s,
                    row_seed,
                    &config_hash,
                    &x,
                    &paths,
                    &support,
                    canceller_spec,
                ) {
                    Ok(row) => rows.push(row),
                    Err(e) => errors.push(RowError {
                        noise_id: noise_id.clone(),
                        t60_s,
                        canceller: canceller_spec.name().to_string(),
                        message: e.to_string(),
                    }),
                }
            }
        }
    }

    Ok(SweepOutcome { rows, errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::NoiseSpec;
    use crate::noise::NoiseKind;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            t60_list: vec![0.2],
            noise_inputs: vec![NoiseSpec::Synthetic(NoiseKind::White)],
            cancellers: vec![CancellerSpec::Null],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn null_canceller_rows_have_zero_nmse_and_hold() {
        let outcome = run_sweep(&small_config()).unwrap();
        assert_eq!(outcome.rows.len(), 1);
        assert!(outcome.errors.is_empty());
        let row = &outcome.rows[0];
        assert!(row.nmse_db.db.abs() < 1e-9, "nmse {}", row.nmse_db.db);
        assert!(row.unified_bound_db.db <= 0.0);
        assert!(row.bound_holds);
        assert_eq!(row.unified_bound_db.db, row
            .info_bound_lin_selected()
            .max(row.support_bound_weighted_db)
            .db);
    }

    #[test]
    fn fxlms_and_null_share_identical_support_bounds() {
        let mut config = small_config();
        config.cancellers = vec![CancellerSpec::Fxlms, CancellerSpec::Null];
        config.fxlms.filter_len = 64; // keep the test quick
        let outcome = run_sweep(&config).unwrap();
        assert_eq!(outcome.rows.len(), 2);
        let (a, b) = (&outcome.rows[0], &outcome.rows[1]);
        assert_eq!(
            a.support_bound_weighted_db.db.to_bits(),
            b.support_bound_weighted_db.db.to_bits()
        );
        assert_eq!(
            a.support_bound_bincount_db.db.to_bits(),
            b.support_bound_bincount_db.db.to_bits()
        );
        assert_eq!(a.seed, b.seed);
    }

    #[test]
    fn unreadable_noise_is_a_row_error_not_fatal() {
        let mut config = small_config();
        config.noise_inputs = vec![
            NoiseSpec::Wav("/nonexistent/missing.wav".into()),
            NoiseSpec::Synthetic(NoiseKind::White),
        ];
        let outcome = run_sweep(&config).unwrap();
        assert_eq!(outcome.errors.len(), 1);
        assert_eq!(outcome.rows.len(), 1);
        assert!(outcome.errors[0].message.contains("missing.wav"));
    }

    #[test]
    fn infeasible_t60_aborts_the_sweep() {
        let mut config = small_config();
        config.t60_list = vec![0.01];
        assert!(matches!(
            run_sweep(&config),
            Err(ReportError::Room(RoomError::InfeasibleT60 { .. }))
        ));
    }

    #[test]
    fn sweep_is_deterministic() {
        let mut config = small_config();
        config.cancellers = vec![CancellerSpec::Fxlms];
        config.fxlms.filter_len = 64;
        let a = run_sweep(&config).unwrap();
        let b = run_sweep(&config).unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        for (x, y) in a.rows.iter().zip(b.rows.iter()) {
            assert_eq!(x.nmse_db.db.to_bits(), y.nmse_db.db.to_bits());
            assert_eq!(x.unified_bound_db.db.to_bits(), y.unified_bound_db.db.to_bits());
            assert_eq!(x.info.mi.to_bits(), y.info.mi.to_bits());
        }
    }
}
