//! Command-line experiment runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use fdgp::experiment::{run_experiment, ExperimentConfig};

/// Runs the jumping-task experiment and writes windowed metrics as CSV.
#[derive(Debug, Parser)]
#[command(name = "fdgp", version, about)]
struct Args {
    /// Master seed; every random stream derives from it.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Trials to run (explore/exploit alternate, starting with explore).
    #[arg(long, default_value_t = 100_000)]
    trials: u64,

    /// Population capacity in micro-rules.
    #[arg(long, default_value_t = 2000)]
    pop_size: u32,

    /// Exploitation trials per metrics row.
    #[arg(long, default_value_t = 50)]
    window: usize,

    /// Metrics CSV path.
    #[arg(long, default_value = "metrics.csv")]
    out: PathBuf,

    /// Run summary JSON path.
    #[arg(long, default_value = "summary.json")]
    summary: PathBuf,

    /// Engine or network override as key=value; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    param: Vec<String>,
}

fn run(args: Args) -> Result<(), String> {
    let mut config = ExperimentConfig {
        seed: args.seed,
        trials: args.trials,
        pop_size: args.pop_size,
        window: args.window,
        ..ExperimentConfig::default()
    };
    if args.trials < 1 {
        return Err("--trials must be at least 1".to_string());
    }
    if args.window < 1 {
        return Err("--window must be at least 1".to_string());
    }
    if args.pop_size < 1 {
        return Err("--pop-size must be at least 1".to_string());
    }
    for pair in &args.param {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("--param '{pair}' is not of the form key=value"))?;
        config.set_param(key.trim(), value.trim()).map_err(|e| e.to_string())?;
    }

    let summary = run_experiment(config, &args.out, &args.summary).map_err(|e| e.to_string())?;
    match &summary.final_metrics {
        Some(row) => println!(
            "{} trials in {:.1}s: performance {:.3}, error {:.3}, {} macro / {} micro rules; metrics {}, summary {}",
            summary.trials_run,
            summary.wall_clock_secs,
            row.performance,
            row.error,
            summary.macro_classifiers,
            summary.micro_classifiers,
            args.out.display(),
            args.summary.display(),
        ),
        None => println!(
            "{} trials in {:.1}s: no full metrics window; metrics {}, summary {}",
            summary.trials_run,
            summary.wall_clock_secs,
            args.out.display(),
            args.summary.display(),
        ),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
