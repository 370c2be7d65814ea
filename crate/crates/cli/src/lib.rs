//! The `gcplab` command line: flags, config merging and subcommand dispatch.

pub mod commands;
pub mod config;
pub mod error;
pub mod parse;
pub mod table;

use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::config::{Experiment, ExperimentConfig, Format, Overrides, SEED_ENV};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gcplab", version, about = "Generalized counting process experiments")]
pub struct Cli {
    /// JSON experiment config; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed for every Monte Carlo output (also read from GCPLAB_SEED).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo replicates.
    #[arg(long, global = true)]
    pub reps: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Family or clock tag, e.g. gcp, gsfcp, tempered, stable.
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Jump rates λ₁,…,λ_k.
    #[arg(long, global = true, value_parser = parse::list_arg)]
    pub rates: Option<::std::vec::Vec<f64>>,
    /// Times, comma separated.
    #[arg(long, global = true, value_parser = parse::list_arg)]
    pub t: Option<::std::vec::Vec<f64>>,
    #[arg(long, global = true)]
    pub n_max: Option<u64>,
    /// Transform arguments: u for pgfs, s for Laplace transforms.
    #[arg(long, global = true, value_parser = parse::list_arg)]
    pub args: Option<::std::vec::Vec<f64>>,
    /// Family parameter as key=value; repeatable.
    #[arg(long = "param", global = true, value_parser = parse::param_arg)]
    pub params: Vec<(String, f64)>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Probability mass function, with optional Monte Carlo comparison.
    Pmf,
    /// Mean and variance at each time.
    Moments,
    /// Probability generating function or Laplace transform.
    Transform,
    /// Jump epochs and sizes of simulated paths.
    Simulate,
    /// Long-range dependence correlation ratio of the tempered family.
    Lrd,
    /// Empirical survival function and log-log tail slope.
    Tails,
    /// Moments of the fractional integral of the process.
    Fracint,
    /// Run the verification checks of a suite.
    Verify {
        /// specfun, gcp, clocks, brownian, subordinated, drift, fracint or all.
        suite: Option<String>,
    },
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            family: self.family.clone(),
            rates: self.rates.clone(),
            params: self.params.clone(),
            t: self.t.clone(),
            n_max: self.n_max,
            reps: self.reps,
            seed: self.seed,
            format: self.format,
            args: self.args.clone(),
            suite: match &self.command {
                Command::Verify { suite } => suite.clone(),
                _ => None,
            },
        }
    }
}

/// A rendered table and, for `verify`, how many of its checks failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub failed: usize,
    pub total: usize,
}

/// Resolves the experiment and runs the subcommand on `cli.workers` threads.
pub fn execute(cli: &Cli, env_seed: Option<&str>) -> Result<Output, CliError> {
    if cli.workers == 0 {
        return Err(CliError::validation("workers must be positive"));
    }
    let cfg = match &cli.config {
        Some(path) => Some(ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let e = Experiment::resolve(cfg, cli.overrides(), env_seed)?;
    let format = e.format;
    let command = cli.command.clone();
    let outcome = gcplab::mc::with_workers(cli.workers, move || match command {
        Command::Pmf => commands::pmf(&e),
        Command::Moments => commands::moments(&e),
        Command::Transform => commands::transform(&e),
        Command::Simulate => commands::simulate(&e),
        Command::Lrd => commands::lrd(&e),
        Command::Tails => commands::tails(&e),
        Command::Fracint => commands::fracint(&e),
        Command::Verify { .. } => commands::verify(&e),
    })
    .map_err(error::invalid)??;
    Ok(Output { text: outcome.table.render(format)?, failed: outcome.failed, total: outcome.table.rows.len() })
}

/// The whole program minus process exit: parses `args`, runs, writes the
/// table to `--out` or `stdout`. Returns the exit code; errors are written
/// to `stderr` as a JSON object.
pub fn run<I, T>(args: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("");
            let err = CliError::validation(first.strip_prefix("error: ").unwrap_or(first));
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.exit_code();
        }
    };
    let result = execute(&cli, env_seed).and_then(|out| {
        match &cli.out {
            Some(path) => std::fs::write(path, &out.text)?,
            None => stdout.write_all(out.text.as_bytes())?,
        }
        if out.failed > 0 {
            return Err(CliError::VerificationFailed { failed: out.failed, total: out.total });
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.to_json());
            err.exit_code()
        }
    }
}

/// Reads the seed fallback from the environment.
pub fn env_seed() -> Option<String> {
    std::env::var(SEED_ENV).ok()
}
