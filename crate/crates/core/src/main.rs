use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use specavg::experiment::{self, ExperimentConfig, RunError};

/// Spectral averaging laboratory.
#[derive(Parser)]
#[command(name = "specavg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write its artifacts.
    Run {
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (overrides the config and $SPECAVG_OUTPUT_ROOT).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the experiment catalog as JSON.
    List,
    /// Parse and validate a config without running it.
    Validate {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn fail(e: RunError) -> ExitCode {
    eprintln!("specavg: {e}");
    ExitCode::from(e.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            println!("{}", experiment::catalog_json());
            ExitCode::SUCCESS
        }
        Command::Validate { config, seed } => {
            let parsed = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(e.into()),
            };
            match experiment::describe(&parsed, seed) {
                Ok(v) => {
                    println!("{}", serde_json::to_string_pretty(&v).expect("json value serializes"));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Run { config, seed, out } => {
            let parsed = match ExperimentConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(e.into()),
            };
            let env_root = std::env::var_os(experiment::OUTPUT_ROOT_ENV).map(PathBuf::from);
            let dir = experiment::output_dir(&parsed, out.as_deref(), env_root.as_deref());
            let report = match experiment::run(&parsed, seed, &dir) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for c in &report.checks {
                println!(
                    "{} {} discrepancy={:e} tolerance={:e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.check,
                    c.discrepancy,
                    c.tolerance
                );
            }
            println!("{} -> {}", report.id, dir.display());
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
    }
}
