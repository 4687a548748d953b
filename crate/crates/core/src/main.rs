//! Command-line entry point.

use clap::{Parser, Subcommand};
use drivefusion::harness::{cmd_compare, cmd_eval, cmd_extract, cmd_train, EvalMode, RunConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "drivefusion",
    about = "Train, evaluate, and ablate a hybrid racing controller in a deterministic 2D simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the policy on an opponent-free scenario and write a checkpoint.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a trained checkpoint without exploration and write traces.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        checkpoint: PathBuf,
        /// ddpg_only, apf_only, tracking_only, or fused.
        #[arg(long, default_value = "fused")]
        mode: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run all four modes on the configured scenario and tabulate outcomes.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Select columns from a trace CSV (to stdout, or --out file).
    Extract {
        #[arg(long)]
        trace: PathBuf,
        /// Comma-separated column names, e.g. time,delta,tau.
        #[arg(long)]
        columns: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> drivefusion::Result<RunConfig> {
    let mut config = RunConfig::load(path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(out) = out {
        config.out_dir = out;
    }
    Ok(config)
}

fn run(cli: Cli) -> drivefusion::Result<()> {
    match cli.command {
        Command::Train { config, seed, out } => {
            let config = load_config(&config, seed, out)?;
            let artifacts = cmd_train(&config)?;
            if let Some(last) = artifacts.metrics.last() {
                eprintln!(
                    "trained {} episodes; final return {:.2}",
                    artifacts.metrics.len(),
                    last.total_return
                );
            }
            println!("metrics: {}", artifacts.metrics_path.display());
            if let Some(ckpt) = artifacts.checkpoint_path {
                println!("checkpoint: {}", ckpt.display());
            }
        }
        Command::Eval {
            config,
            checkpoint,
            mode,
            seed,
            out,
        } => {
            let config = load_config(&config, seed, out)?;
            let mode = EvalMode::parse(&mode)?;
            let artifacts = cmd_eval(&config, &checkpoint, mode)?;
            for record in &artifacts.records {
                println!(
                    "episode {}: return {:.2}, steps {}, termination {}, min_opp_dist {:.2}, mean_|e| {:.3}",
                    record.episode,
                    record.total_return,
                    record.steps,
                    record.termination.as_str(),
                    record.min_opp_distance,
                    record.mean_abs_track_pos
                );
            }
            println!("summary: {}", artifacts.summary_path.display());
        }
        Command::Compare {
            config,
            checkpoint,
            seed,
            out,
        } => {
            let config = load_config(&config, seed, out)?;
            let rows = cmd_compare(&config, &checkpoint)?;
            println!("mode,return,steps,termination,min_opp_distance,mean_abs_e_norm");
            for row in rows {
                let r = row.record;
                println!(
                    "{},{:.3},{},{},{:.3},{:.4}",
                    row.mode.as_str(),
                    r.total_return,
                    r.steps,
                    r.termination.as_str(),
                    r.min_opp_distance,
                    r.mean_abs_track_pos
                );
            }
        }
        Command::Extract {
            trace,
            columns,
            out,
        } => {
            let cols: Vec<&str> = columns.split(',').map(str::trim).collect();
            let selected = cmd_extract(&trace, &cols, out.as_deref())?;
            if out.is_none() {
                print!("{selected}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
