use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use report_cli::config::{CancellerSpec, ExperimentConfig, NoiseSpec};
use report_cli::report::{csv_string, read_json_report, write_csv, write_json_report};
use report_cli::sweep::{run_sweep, SweepOutcome};

#[derive(Parser)]
#[command(
    name = "anc-bound",
    version,
    about = "Simulate ANC scenarios, run cancellers and evaluate NMSE lower bounds"
)]
struct Cli {
    /// TOML experiment config; built-in defaults apply when omitted.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// Flag overrides for any config key the subcommands touch.
#[derive(Args, Debug, Default)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated reverberation times in seconds.
    #[arg(long, value_delimiter = ',')]
    t60_list: Option<Vec<f64>>,
    /// Comma-separated noise inputs (surrogate names or wav:<path>).
    #[arg(long, value_delimiter = ',')]
    noises: Option<Vec<String>>,
    /// Comma-separated cancellers (fxlms, null, external:<path>).
    #[arg(long, value_delimiter = ',')]
    cancellers: Option<Vec<String>>,
    #[arg(long)]
    fft_size: Option<usize>,
    #[arg(long)]
    threshold_db: Option<f64>,
    #[arg(long)]
    bin_count: Option<usize>,
    #[arg(long)]
    bandwidth_scale: Option<f64>,
    #[arg(long)]
    frame_len: Option<usize>,
    #[arg(long)]
    frame_hop: Option<usize>,
    #[arg(long)]
    filter_len: Option<usize>,
    #[arg(long)]
    step_size: Option<f64>,
    #[arg(long)]
    leak: Option<f64>,
    /// Path-energy mode of the linear info bound: full or direct.
    #[arg(long)]
    ep_mode: Option<String>,
    #[arg(long)]
    clip_seconds: Option<f64>,
    #[arg(long)]
    sample_rate_hz: Option<u32>,
}

impl Overrides {
    fn apply(&self, config: &mut ExperimentConfig) -> Result<()> {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(list) = &self.t60_list {
            config.t60_list = list.clone();
        }
        if let Some(noises) = &self.noises {
            config.noise_inputs = noises
                .iter()
                .map(|s| s.parse::<NoiseSpec>())
                .collect::<Result<_, _>>()?;
        }
        if let Some(cancellers) = &self.cancellers {
            config.cancellers = cancellers
                .iter()
                .map(|s| s.parse::<CancellerSpec>())
                .collect::<Result<_, _>>()?;
        }
        if let Some(v) = self.fft_size {
            config.support.fft_size = v;
        }
        if let Some(v) = self.threshold_db {
            config.support.threshold_db = v;
        }
        if let Some(v) = self.bin_count {
            config.kde.bin_count = v;
        }
        if let Some(v) = self.bandwidth_scale {
            config.kde.bandwidth_scale = v;
        }
        if let Some(v) = self.frame_len {
            config.kde.frame_len = v;
        }
        if let Some(v) = self.frame_hop {
            config.kde.frame_hop = v;
        }
        if let Some(v) = self.filter_len {
            config.fxlms.filter_len = v;
        }
        if let Some(v) = self.step_size {
            config.fxlms.step_size = v;
        }
        if let Some(v) = self.leak {
            config.fxlms.leak = v;
        }
        if let Some(mode) = &self.ep_mode {
            config.info_ep_mode = match mode.as_str() {
                "full" => info_bound::EpMode::FullEnergy,
                "direct" => info_bound::EpMode::DirectPath,
                other => bail!("unknown ep mode '{other}' (expected full or direct)"),
            };
        }
        if let Some(v) = self.clip_seconds {
            config.clip_seconds = v;
        }
        if let Some(v) = self.sample_rate_hz {
            config.sample_rate_hz = v;
        }
        Ok(())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate the primary/secondary RIR pair for one T60 and export them.
    SimulateRir {
        #[arg(long, default_value_t = 0.2)]
        t60: f64,
        #[arg(long, default_value = "rirs")]
        out_dir: PathBuf,
        /// Export format: wav, json or both.
        #[arg(long, default_value = "both")]
        format: String,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run one canceller over one noise input and export x/d/y/e plus a
    /// JSON manifest.
    RunAnc {
        #[arg(long, default_value = "white")]
        noise: String,
        #[arg(long, default_value_t = 0.2)]
        t60: f64,
        #[arg(long, default_value = "fxlms")]
        canceller: String,
        #[arg(long, default_value = "anc-run")]
        out_dir: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compute NMSE and every bound for one (noise, t60, canceller) cell.
    Bound {
        #[arg(long, default_value = "white")]
        noise: String,
        #[arg(long, default_value_t = 0.2)]
        t60: f64,
        #[arg(long, default_value = "fxlms")]
        canceller: String,
        /// Also write the full row as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the full sweep and write the CSV/JSON reports.
    Sweep {
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_json: Option<PathBuf>,
        /// Exit 0 even when a bound is violated or a row fails.
        #[arg(long)]
        no_assert_bound: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Convert a JSON report to CSV or re-emit it as JSON.
    Report {
        #[arg(long)]
        input: PathBuf,
        /// Output format: csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => Ok(ExperimentConfig::load_toml(p)?),
        None => Ok(ExperimentConfig::default()),
    }
}

fn single_cell_config(
    base: ExperimentConfig,
    noise: &str,
    t60: f64,
    canceller: &str,
) -> Result<ExperimentConfig> {
    let mut config = base;
    config.noise_inputs = vec![noise.parse()?];
    config.t60_list = vec![t60];
    config.cancellers = vec![canceller.parse()?];
    Ok(config)
}

fn print_rows(outcome: &SweepOutcome) {
    for row in &outcome.rows {
        println!(
            "{:<18} t60={:<5} {:<8} nmse={:>8.3} dB  info={:>8.3} dB  support={:>8.3} dB  \
             unified={:>8.3} dB  holds={}",
            row.noise_id,
            row.t60_s,
            row.canceller,
            row.nmse_db.db,
            row.info_bound_lin_selected().db,
            row.support_bound_weighted_db.db,
            row.unified_bound_db.db,
            row.bound_holds
        );
    }
    for err in &outcome.errors {
        eprintln!(
            "error: {} t60={} {}: {}",
            err.noise_id, err.t60_s, err.canceller, err.message
        );
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut config = load_config(&cli.config)?;

    match cli.command {
        Command::SimulateRir {
            t60,
            out_dir,
            format,
            overrides,
        } => {
            overrides.apply(&mut config)?;
            let geometry = config.scene_geometry();
            let paths = room_sim::simulate_paths(&geometry, t60)?;
            std::fs::create_dir_all(&out_dir)?;
            let primary_cfg = geometry.room_config(geometry.ref_mic_m, geometry.err_mic_m, t60);
            let secondary_cfg = geometry.room_config(geometry.speaker_m, geometry.err_mic_m, t60);
            for (name, ir, room_cfg) in [
                ("primary", &paths.primary, &primary_cfg),
                ("secondary", &paths.secondary, &secondary_cfg),
            ] {
                let hash = room_sim::config_hash(room_cfg);
                if format == "wav" || format == "both" {
                    room_sim::export_rir_wav(&out_dir.join(format!("{name}.wav")), ir)?;
                }
                if format == "json" || format == "both" {
                    room_sim::export_rir_json(&out_dir.join(format!("{name}.json")), ir, &hash)?;
                }
                println!(
                    "{name}: {} taps @ {} Hz, energy {:.6e}, config {hash}",
                    ir.len(),
                    ir.sample_rate_hz(),
                    ir.energy()
                );
            }
            println!("wrote RIRs to {}", out_dir.display());
        }

        Command::RunAnc {
            noise,
            t60,
            canceller,
            out_dir,
            overrides,
        } => {
            overrides.apply(&mut config)?;
            let config = single_cell_config(config, &noise, t60, &canceller)?;
            let outcome = run_sweep(&config)?;
            if let Some(err) = outcome.errors.first() {
                bail!("run failed: {}", err.message);
            }
            // Re-run the pipeline to export the waveforms (the sweep only
            // retains metrics).
            let geometry = config.scene_geometry();
            let paths = room_sim::simulate_paths(&geometry, t60)?;
            let noise_spec: NoiseSpec = noise.parse()?;
            let row_seed = config.row_seed(&noise_spec.id(), t60);
            let x = report_cli::sweep::load_noise(&noise_spec, &config, row_seed)?;
            let canceller_spec: CancellerSpec = canceller.parse()?;
            let built = report_cli::sweep::build_canceller(&canceller_spec, &config, &paths)?;
            let run = anc_engine::run_pipeline(&x, &paths, &built)?;
            anc_engine::export_run(
                &out_dir,
                &run,
                canceller_spec.name(),
                Some(row_seed),
                Some(config.config_hash()),
            )?;
            print_rows(&outcome);
            println!("wrote run to {}", out_dir.display());
        }

        Command::Bound {
            noise,
            t60,
            canceller,
            json,
            overrides,
        } => {
            overrides.apply(&mut config)?;
            let config = single_cell_config(config, &noise, t60, &canceller)?;
            let outcome = run_sweep(&config)?;
            print_rows(&outcome);
            if let Some(err) = outcome.errors.first() {
                bail!("bound computation failed: {}", err.message);
            }
            if let Some(path) = json {
                std::fs::write(&path, serde_json::to_string_pretty(&outcome.rows)?)?;
                println!("wrote {}", path.display());
            }
        }

        Command::Sweep {
            out_csv,
            out_json,
            no_assert_bound,
            overrides,
        } => {
            overrides.apply(&mut config)?;
            let outcome = run_sweep(&config)?;
            print_rows(&outcome);
            match &out_csv {
                Some(path) => {
                    let file = std::fs::File::create(path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    write_csv(&outcome.rows, file)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{}", csv_string(&outcome.rows)?),
            }
            if let Some(path) = &out_json {
                write_json_report(path, &config, &outcome)?;
                println!("wrote {}", path.display());
            }
            let violations = outcome.rows.iter().filter(|r| !r.bound_holds).count();
            if violations > 0 {
                eprintln!("{violations} row(s) violate the unified bound");
            }
            if !outcome.errors.is_empty() {
                eprintln!("{} row(s) failed", outcome.errors.len());
            }
            if !no_assert_bound && (violations > 0 || !outcome.errors.is_empty()) {
                std::process::exit(1);
            }
        }

        Command::Report { input, format, out } => {
            let report = read_json_report(&input)?;
            let text = match format.as_str() {
                "csv" => csv_string(&report.rows)?,
                "json" => serde_json::to_string_pretty(&report)?,
                other => bail!("unknown report format '{other}' (expected csv or json)"),
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, text)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}
