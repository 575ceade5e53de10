use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use patsim::cli::{
    defaults_help, echo_config, ensure_dir, load_config, write_atomic, write_json,
    write_run_bundle, CONFIG_ECHO_FILE, SUMMARY_FILE,
};
use patsim::harness::{run_comparison, ComparisonSummary, Mission, RunReport};
use patsim::{AlgorithmVariant, Error, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "patsim",
    version,
    about = "Monte Carlo PAT simulator for ground-air optical links"
)]
#[command(after_long_help = defaults_help())]
struct Cli {
    /// Suppress progress and summary output on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one mission and write trace.csv, summary.json and config.txt.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        variant: Option<AlgorithmVariant>,
    },
    /// Paired-seed comparison over variants and correlation coefficients.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
    },
    /// Repeat a comparison while varying one config key.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        /// Config key to vary.
        #[arg(long)]
        param: String,
        /// Comma-separated values for the key.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Config file; missing keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Grid {
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "baseline,baseline_aoa,baseline_ccr,proposed"
    )]
    variants: Vec<AlgorithmVariant>,
    #[arg(long, value_delimiter = ',', default_value = "0.4,0.7")]
    rhos: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    runs: usize,
    /// First seed; run i uses seed + i. Defaults to the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct SweepPoint {
    value: String,
    summary: ComparisonSummary,
}

#[derive(Serialize)]
struct SweepSummary {
    param: String,
    values: Vec<String>,
    points: Vec<SweepPoint>,
}

fn base_config(common: &Common) -> patsim::Result<ScenarioConfig> {
    match &common.config {
        Some(p) => load_config(p),
        None => Ok(ScenarioConfig::default()),
    }
}

fn configure_threads() -> patsim::Result<()> {
    let Ok(v) = std::env::var("PATSIM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::config("PATSIM_THREADS", "must be a positive integer"))?;
    if n == 0 {
        return Err(Error::config(
            "PATSIM_THREADS",
            "must be a positive integer",
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::config("PATSIM_THREADS", e.to_string()))
}

fn write_comparison(
    dir: &Path,
    cfg: &ScenarioConfig,
    summary: &impl Serialize,
) -> patsim::Result<()> {
    ensure_dir(dir)?;
    write_json(&dir.join(SUMMARY_FILE), summary)?;
    write_atomic(&dir.join(CONFIG_ECHO_FILE), echo_config(cfg).as_bytes())
}

fn report(quiet: bool, summary: &ComparisonSummary) {
    if quiet {
        return;
    }
    for c in &summary.cells {
        let mrad = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{:.3}", v * 1e3));
        eprintln!(
            "{:<13} rho={:<4} outages={:>7.2}±{:<6.2} acq={:>7}s err p50/p95={}/{} mrad connected={:.4}",
            c.variant.token(),
            c.rho,
            c.outages_mean,
            c.outages_std,
            c.acq_time_mean_s.map_or("-".to_string(), |v| format!("{v:.2}")),
            mrad(c.err_p50_rad),
            mrad(c.err_p95_rad),
            c.connected_fraction_mean,
        );
    }
}

fn execute(cli: Cli) -> patsim::Result<()> {
    configure_threads()?;
    let quiet = cli.quiet;
    let started = Instant::now();
    match cli.command {
        Command::Run {
            common,
            seed,
            variant,
        } => {
            let mut cfg = base_config(&common)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(v) = variant {
                cfg.variant = v;
            }
            let out = Mission::new(&cfg)?.run(cfg.seed, true);
            let trace = out.trace;
            let summary = ComparisonSummary::single(
                &cfg,
                RunReport {
                    seed: cfg.seed,
                    metrics: out.metrics,
                    max_ac_down_beacon_err_rad: out.max_ac_down_beacon_err_rad,
                },
            );
            let bundle = write_run_bundle(&common.out, &cfg, &trace, &summary)?;
            report(quiet, &summary);
            if !quiet {
                eprintln!(
                    "wrote {} rows to {}",
                    trace.len(),
                    bundle.trace_path.display()
                );
            }
        }
        Command::Compare { common, grid } => {
            let mut cfg = base_config(&common)?;
            if let Some(s) = grid.seed {
                cfg.seed = s;
            }
            let summary = run_comparison(&cfg, &grid.variants, &grid.rhos, grid.runs)?;
            write_comparison(&common.out, &cfg, &summary)?;
            report(quiet, &summary);
        }
        Command::Sweep {
            common,
            grid,
            param,
            values,
        } => {
            let mut cfg = base_config(&common)?;
            if let Some(s) = grid.seed {
                cfg.seed = s;
            }
            if !ScenarioConfig::KEYS.contains(&param.as_str()) {
                return Err(Error::config(param, "unknown config key"));
            }
            let mut points = Vec::with_capacity(values.len());
            for value in &values {
                let mut point_cfg = cfg.clone();
                point_cfg.set(&param, value)?;
                let summary = run_comparison(&point_cfg, &grid.variants, &grid.rhos, grid.runs)?;
                if !quiet {
                    eprintln!("{param} = {value}");
                }
                report(quiet, &summary);
                points.push(SweepPoint {
                    value: value.clone(),
                    summary,
                });
            }
            let sweep = SweepSummary {
                param,
                values,
                points,
            };
            write_comparison(&common.out, &cfg, &sweep)?;
        }
    }
    if !quiet {
        eprintln!("done in {:.2} s", started.elapsed().as_secs_f64());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
