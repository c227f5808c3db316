//! `lowensim`: runs the experiment catalog from JSON configuration files.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tracing::{debug, error, info};

use config::{ExperimentConfig, Params};
use experiments::Experiment;
use output::{Record, Status};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] lowensim_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{failed} of {total} runs failed")]
    Failed { failed: usize, total: usize },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lowensim", version, about = "Low-energy simulation experiments")]
struct Args {
    /// Experiment name (see the list printed on a bad name).
    experiment: String,
    /// JSON configuration: params, optional sweep, seed, output.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for sweep points.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also write a JSON mirror of the rows.
    #[arg(long)]
    json: bool,
    /// CSV destination; stdout when neither this nor the config names one.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Drop the timestamp and the wall-time column so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

fn main() -> ExitCode {
    let filter = tracing_subscriber::EnvFilter::try_from_env("LOWENSIM_LOG")
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("error"));
    tracing_subscriber::fmt().with_env_filter(filter).with_writer(std::io::stderr).init();

    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lowensim: {e}");
            if let CliError::Config(_) = e {
                eprintln!("experiments: {}", experiments::names().join(", "));
                for e in experiments::CATALOG {
                    eprintln!("  {:<24} {}", e.name, e.about);
                }
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let exp = experiments::find(&args.experiment)
        .ok_or_else(|| CliError::Config(format!("unknown experiment {}", args.experiment)))?;
    let cfg = match &args.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::parse("{}")?,
    };
    if let Some(name) = &cfg.experiment {
        if name != exp.name {
            return Err(CliError::Config(format!("config is for {name}, not {}", exp.name)));
        }
    }
    if args.jobs == 0 {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let points = cfg.points();
    info!(experiment = exp.name, points = points.len(), jobs = args.jobs, "starting");

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    // par_iter + collect keeps sweep order regardless of completion order
    let records: Vec<Record> = pool.install(|| {
        points.into_par_iter().enumerate().map(|(i, raw)| run_point(exp, i, cfg.seed, raw)).collect()
    });
    if let Some(bad) = records.iter().find_map(|r| r.config_error.clone()) {
        return Err(CliError::Config(bad));
    }

    let dest = args.output.clone().or_else(|| cfg.output.clone());
    let timing = !args.no_timing;
    output::write_csv(exp, cfg.seed, &records, dest.as_deref(), timing)?;
    if args.json {
        output::write_json(exp, cfg.seed, &records, dest.as_deref(), timing)?;
    }

    let failed = records.iter().flat_map(|r| &r.rows).filter(|r| r.status == Status::Failed).count();
    if failed > 0 {
        return Err(CliError::Failed { failed, total: records.len() });
    }
    Ok(())
}

/// Runs one sweep point. Its RNG is ChaCha8 keyed by the config seed on
/// stream `index`, so every point sees the same draws at any `--jobs`.
fn run_point(exp: &Experiment, index: usize, seed: u64, raw: std::collections::BTreeMap<String, serde_json::Value>) -> Record {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let params = Params::new(raw);
    let start = Instant::now();
    let result = (exp.run)(&params, &mut rng);
    let wall = start.elapsed().as_secs_f64();
    debug!(index, wall, "point finished");
    match result {
        Ok(rows) => Record::ok(index, params.resolved(), rows, wall),
        Err(CliError::Config(msg)) => Record::config_error(index, msg),
        Err(e) => {
            error!(index, "run failed: {e}");
            Record::failed(index, params.resolved(), e.to_string(), wall)
        }
    }
}
