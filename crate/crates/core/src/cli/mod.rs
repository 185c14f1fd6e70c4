//! Batch command-line front end.
//!
//! Exit codes: 0 success, 1 tolerance failure (`verify`), 2 invalid input,
//! 3 numerical failure. Input is validated completely before any output file
//! is created.

pub mod commands;
pub mod config;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use commands::{Outcome, RunOptions};
use config::load;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mdframe",
    version,
    about = "MD systems on the half-line and their Gabor equivalents"
)]
pub struct Cli {
    /// Worker threads for matrix assembly (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    /// Omit the wall-clock field from JSON outputs.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reduce (p, q) and classify the sampling regime.
    Params {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// Sample the equivalent Gabor windows of an MD system.
    Generators(ConfigArgs),
    /// Check the MD/Gabor equivalence numerically.
    Verify {
        #[command(flatten)]
        args: ConfigArgs,
        /// Overrides both pointwise and Gram tolerances.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Estimate frame bounds and write the Gram matrix.
    FrameBounds(ConfigArgs),
    /// Frame bounds and probe residuals over (p, q) pairs.
    DensityScan(ConfigArgs),
    /// Uncertainty products against grid size.
    Uncertainty(ConfigArgs),
}

/// Where a failure happened, which decides the exit code.
#[derive(Debug)]
pub enum Failure {
    Validation(Error),
    Numerical(Error),
    Tolerance(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Numerical(_) => EXIT_NUMERICAL,
            Failure::Tolerance(_) => EXIT_TOLERANCE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Validation(e) => write!(f, "invalid input: {e}"),
            Failure::Numerical(e) => write!(f, "numerical failure: {e}"),
            Failure::Tolerance(msg) => write!(f, "tolerance exceeded: {msg}"),
        }
    }
}

fn options(args: &ConfigArgs) -> RunOptions {
    RunOptions {
        out: args.out.clone(),
        timestamp: !args.no_timestamp,
    }
}

/// Validates with `plan`, then prepares the output directory and runs.
fn staged<P>(
    args: &ConfigArgs,
    plan: impl FnOnce() -> Result<P>,
    run: impl FnOnce(&P, &RunOptions) -> Result<Outcome>,
) -> std::result::Result<(), Failure> {
    let plan = plan().map_err(Failure::Validation)?;
    let opts = options(args);
    fs::create_dir_all(&opts.out).map_err(|e| Failure::Numerical(e.into()))?;
    match run(&plan, &opts).map_err(Failure::Numerical)? {
        Outcome::Ok => Ok(()),
        Outcome::ToleranceExceeded(msg) => Err(Failure::Tolerance(msg)),
    }
}

pub fn run(cli: &Cli) -> std::result::Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Validation(Error::OutOfRange {
                name: "threads",
                detail: "must be at least 1".into(),
            }));
        }
        // Fails only if a pool already exists, which keeps its own size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match &cli.command {
        Command::Params { b, p, q } => {
            let text = commands::params_report(*b, *p, *q).map_err(Failure::Validation)?;
            print!("{text}");
            Ok(())
        }
        Command::Generators(a) => staged(
            a,
            || commands::plan_generators(&load(&a.config)?),
            commands::run_generators,
        ),
        Command::Verify { args, tol } => staged(
            args,
            || commands::plan_verify(&load(&args.config)?, *tol),
            commands::run_verify,
        ),
        Command::FrameBounds(a) => staged(
            a,
            || commands::plan_frame_bounds(&load(&a.config)?),
            commands::run_frame_bounds,
        ),
        Command::DensityScan(a) => staged(
            a,
            || commands::plan_density_scan(&load(&a.config)?),
            commands::run_density_scan,
        ),
        Command::Uncertainty(a) => staged(
            a,
            || commands::plan_uncertainty(&load(&a.config)?),
            commands::run_uncertainty,
        ),
    }
}
