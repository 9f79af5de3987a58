//! `breg-anneal`: clustering runs, simulation experiments, and plot-data
//! extraction on top of the annealed Bregman clustering library.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data or domain error,
//! 4 fit failure. Result files are written atomically; a nonzero exit never
//! leaves a partial file at the target path.

use std::path::PathBuf;
use std::process::ExitCode;

mod commands;
mod config;
mod output;

/// An error carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }

    pub fn fit(message: impl Into<String>) -> Self {
        Self {
            code: 4,
            message: message.into(),
        }
    }

    /// Library errors surfaced while loading or validating inputs.
    pub fn from_data(e: breg_core::Error) -> Self {
        Self::data(e.to_string())
    }

    /// Library errors surfaced while configuring a run.
    pub fn from_config(e: breg_core::Error) -> Self {
        match e {
            breg_core::Error::Io(_)
            | breg_core::Error::Parse { .. }
            | breg_core::Error::EmptyAfterFilter
            | breg_core::Error::Domain { .. } => Self::data(e.to_string()),
            other => Self::config(other.to_string()),
        }
    }

    /// Library errors surfaced while fitting.
    pub fn from_fit(e: breg_core::Error) -> Self {
        match e {
            // A k larger than the dataset is a configuration problem.
            breg_core::Error::InvalidK { .. } | breg_core::Error::InvalidSchedule(_) => {
                Self::config(e.to_string())
            }
            breg_core::Error::Domain { .. } => Self::data(e.to_string()),
            other => Self::fit(other.to_string()),
        }
    }
}

const USAGE: &str = "usage:
  breg-anneal cluster --config <file>
  breg-anneal experiment --config <file>
  breg-anneal plotdata --report <file> --plot <figure2|figure3> --out <file>";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("breg-anneal: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(args: &[String]) -> Result<(), CliError> {
    let command = args
        .first()
        .ok_or_else(|| CliError::config(USAGE))?
        .as_str();
    match command {
        "cluster" | "experiment" => {
            let config_path = flag_value(&args[1..], "--config")?;
            let cfg = config::load_config(&config_path)?;
            if command == "cluster" {
                commands::cmd_cluster(&cfg)
            } else {
                commands::cmd_experiment(&cfg)
            }
        }
        "plotdata" => {
            let report = flag_value(&args[1..], "--report")?;
            let plot = flag_string(&args[1..], "--plot")?;
            let out = flag_value(&args[1..], "--out")?;
            commands::cmd_plotdata(&report, &plot, &out)
        }
        other => Err(CliError::config(format!("unknown command {other:?}\n{USAGE}"))),
    }
}

fn flag_string(args: &[String], flag: &str) -> Result<String, CliError> {
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        if arg == flag {
            return it
                .next()
                .cloned()
                .ok_or_else(|| CliError::config(format!("{flag} needs a value\n{USAGE}")));
        }
    }
    Err(CliError::config(format!("missing {flag}\n{USAGE}")))
}

fn flag_value(args: &[String], flag: &str) -> Result<PathBuf, CliError> {
    flag_string(args, flag).map(PathBuf::from)
}
