//! The `zblab` batch driver.
//!
//! Every command resolves a [`RunConfig`] from defaults, an optional config
//! file, `--set` overrides and explicit flags, writes its artifacts and a
//! JSON Lines report into the output directory, and echoes the report on
//! stdout. Exit codes: 0 success, 1 check failure, 2 usage or config error.

mod commands;
mod config;
mod verify;

pub use commands::{run_horizon, run_selftest, run_simulate, run_spectrum};
pub use config::{
    parse_tolerance, ConfigFile, Overrides, RunConfig, DEFAULTS_HELP, DEFAULT_TOLERANCES,
};
pub use verify::run_verify;

use clap::{Parser, Subcommand};
use std::ffi::OsString;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn physics(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "zblab", version, about = "Zitterbewegung laboratory for the free Dirac field", after_help = DEFAULTS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Config file (flat TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory [default: $ZBLAB_OUT, else .]
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for randomized sweeps [default: 1]
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Override one tolerance; repeatable.
    #[arg(long, global = true, value_name = "NAME=VALUE")]
    tolerance: Vec<String>,
    /// Override one config key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Diagram format for `horizon`: svg | ascii [default: svg]
    #[arg(long, global = true, value_name = "FORMAT")]
    format: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kinematic invariants, CAR, decomposition residuals and commutators.
    Verify,
    /// Propagate a wave packet and write trajectory.csv.
    Simulate {
        /// Put all weight on the positive-energy branch.
        #[arg(long)]
        pure_branch: bool,
    },
    /// Dominant frequency of a trajectory's current.
    Spectrum {
        /// Trajectory CSV [default: config key `trajectory`]
        trajectory: Option<PathBuf>,
        /// Fail unless the frequency is 2 omega(k0) within the `frequency` tolerance.
        #[arg(long)]
        check: bool,
    },
    /// Validate a horizon scenario and draw its exchange diagram.
    Horizon {
        /// Scenario file [default: config key `scenario`]
        scenario: Option<PathBuf>,
    },
    /// Quick end-to-end run of every module.
    Selftest,
}

/// Outcome of a command that ran to completion.
pub struct Outcome {
    pub report: crate::report::Report,
    /// Report file name inside the output directory.
    pub report_name: &'static str,
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let overrides = Overrides {
        config: cli.config.as_deref(),
        set: &cli.set,
        tolerance: &cli.tolerance,
        seed: cli.seed,
        out: cli.out.as_deref(),
        format: cli.format.as_deref(),
        env_out: std::env::var_os("ZBLAB_OUT")
            .filter(|v| !v.is_empty())
            .map(PathBuf::from),
    };
    let cfg = RunConfig::resolve(&overrides)?;
    let name = match &cli.command {
        Command::Verify => "verify",
        Command::Simulate { .. } => "simulate",
        Command::Spectrum { .. } => "spectrum",
        Command::Horizon { .. } => "horizon",
        Command::Selftest => "selftest",
    };
    if let Some(declared) = cfg.command.as_deref() {
        if declared != name {
            return Err(CliError::Usage(format!(
                "config is for `{declared}`, not `{name}`"
            )));
        }
    }
    match &cli.command {
        Command::Verify => Ok(Outcome {
            report: run_verify(&cfg)?,
            report_name: "verify.jsonl",
        }),
        Command::Simulate { pure_branch } => run_simulate(&cfg, *pure_branch),
        Command::Spectrum { trajectory, check } => {
            run_spectrum(&cfg, trajectory.as_deref(), *check)
        }
        Command::Horizon { scenario } => run_horizon(&cfg, scenario.as_deref()),
        Command::Selftest => run_selftest(&cfg),
    }
    .and_then(|o| {
        let dir = cfg.output_dir()?;
        o.report
            .write_to(&dir.join(o.report_name))
            .map_err(|e| CliError::Usage(format!("cannot write report: {e}")))?;
        Ok(o)
    })
}

/// Parse arguments (including the program name), run, and return the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.report.to_text());
            if outcome.report.passed() {
                EXIT_OK
            } else {
                eprintln!("zblab: failed: {}", outcome.report.failures().join(", "));
                EXIT_FAIL
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("zblab: {msg}");
            eprintln!("Run `zblab --help` for usage.");
            EXIT_USAGE
        }
    }
}
