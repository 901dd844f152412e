//! `acq <command> [options]`.
//!
//! Exit codes: 0 success, 1 invalid input or I/O failure, 2 a checked
//! property failed.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::error::{Error, Result};

use super::config::{parse_config, Command};
use super::run::run;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Bandit,
    Gridworld,
    Converge,
    Continuous,
    Check,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Bandit => Command::Bandit,
            CommandArg::Gridworld => Command::Gridworld,
            CommandArg::Converge => Command::Converge,
            CommandArg::Continuous => Command::Continuous,
            CommandArg::Check => Command::Check,
        }
    }
}

/// Overestimation/underestimation experiments for max-value estimators.
///
/// Option values are checked against the selected command; a flag the
/// command does not use is an error.
#[derive(Debug, Parser)]
#[command(name = "acq", version)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    command: CommandArg,
    /// Flat TOML file of settings; flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, value_name = "U64")]
    seed: Option<String>,
    /// Monte-Carlo trials (bandit, continuous, check).
    #[arg(long, value_name = "N")]
    trials: Option<String>,
    /// Independent learning runs (gridworld, converge).
    #[arg(long, value_name = "N")]
    runs: Option<String>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, value_name = "N")]
    threads: Option<String>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<String>,
    /// Also write plot.svg.
    #[arg(long)]
    plot: bool,
    /// Bandit sweep: impressions, ads or maxprob.
    #[arg(long)]
    setting: Option<String>,
    /// Grid side length.
    #[arg(long)]
    n: Option<String>,
    /// Discount factor.
    #[arg(long)]
    gamma: Option<String>,
    /// Interaction steps per run.
    #[arg(long)]
    steps: Option<String>,
    /// Comma-separated learners: q, dq, cdq, acK, auto.
    #[arg(long)]
    algos: Option<String>,
    /// Comma-separated candidate counts.
    #[arg(long)]
    k: Option<String>,
    /// Table update mode: random, simultaneous (converge also: both).
    #[arg(long)]
    mode: Option<String>,
    /// Comma-separated properties: property1, theorem1, theorem2, lemma1, var_halving.
    #[arg(long)]
    property: Option<String>,
}

impl Cli {
    fn flags(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let pairs: [(&'static str, &Option<String>); 13] = [
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("runs", &self.runs),
            ("threads", &self.threads),
            ("out", &self.out),
            ("setting", &self.setting),
            ("n", &self.n),
            ("gamma", &self.gamma),
            ("steps", &self.steps),
            ("algos", &self.algos),
            ("k", &self.k),
            ("mode", &self.mode),
            ("property", &self.property),
        ];
        for (key, v) in pairs {
            if let Some(v) = v {
                out.push((key, v.clone()));
            }
        }
        if self.plot {
            out.push(("plot", "true".into()));
        }
        out
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    let file = match &cli.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?),
        None => None,
    };
    let spec = parse_config(cli.command.into(), file.as_deref(), &cli.flags())?;
    let art = run(&spec)?;
    println!("wrote {}", art.results.display());
    println!("wrote {}", art.manifest.display());
    if let Some(p) = &art.plot {
        println!("wrote {}", p.display());
    }
    for note in &art.outcome.notes {
        println!("{note}");
    }
    Ok(art.outcome.check_failed)
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(false) => 0,
        Ok(true) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
