//! The `lhc-kit` command line.
//!
//! Exit status: 0 on success, 1 when a certificate or hypothesis fails,
//! 2 on usage, parse or range errors.

mod tasks;
mod validate;

use crate::error::Error;
use clap::{Parser, Subcommand};
use serde::{Deserialize, Deserializer, Serialize};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub use tasks::{
    AssembleIdArgs, CodebookArgs, DecomposeArgs, DerandomizeArgs, FalsifyArgs, IdSimArgs, RatesArgs, Task,
    VerifyArgs,
};
pub use validate::{diagnose, Diagnostic};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lhc-kit", version, about = "Locally homomorphic channels: verify, decompose, assemble, simulate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    #[command(flatten)]
    Task(Task),
    /// Run the task described by an experiment config.
    Run(ConfigArgs),
    /// Check an experiment config without running it.
    Validate(ConfigArgs),
}

#[derive(Debug, clap::Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub config: PathBuf,
}

/// A task plus its parameters, stored as JSON with a `"task"` tag.
/// Relative paths are resolved against the config file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExperimentConfig {
    pub task: Task,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let mut config: ExperimentConfig = crate::code_bridge::read_json(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in config.task.paths_mut() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }
}

/// One value, broadcast to every edge, or one value per edge. Written
/// `0.1` or `0.1,0.2` on the command line, a number or an array in JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Profile(pub Vec<f64>);

impl Profile {
    pub fn expand(&self, name: &str, len: usize) -> Result<Vec<f64>, Error> {
        match self.0.len() {
            1 => Ok(vec![self.0[0]; len]),
            k if k == len => Ok(self.0.clone()),
            k => Err(Error::Shape(format!("{name} has {k} entries, expected 1 or {len}"))),
        }
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let values = s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("'{v}' is not a number")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Profile(values))
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(f64),
            Many(Vec<f64>),
        }
        let values = match Raw::deserialize(d)? {
            Raw::One(v) => vec![v],
            Raw::Many(v) => v,
        };
        if values.is_empty() {
            return Err(serde::de::Error::custom("profile is empty"));
        }
        Ok(Profile(values))
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::HypothesisViolated(_)
        | Error::Counterexample { .. }
        | Error::EmptyBlock { .. }
        | Error::LambdaTooLarge { .. }
        | Error::Infeasible { .. }
        | Error::EdgeCountMismatch(_)
        | Error::ChainInconsistent(_)
        | Error::RequiresPartition(_)
        | Error::RequiresBijective(_)
        | Error::IsolatedVertex(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Never panics on bad input.
pub fn main_with_args<I, T>(args: I) -> i32
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
    match cli.command {
        Command::Task(task) => finish(task.execute()),
        Command::Run(args) => {
            let config = match ExperimentConfig::load(&args.config) {
                Ok(c) => c,
                Err(e) => return finish(Err(e)),
            };
            let diagnostics = diagnose(&config.task);
            if !diagnostics.is_empty() {
                for d in &diagnostics {
                    eprintln!("error: {d}");
                }
                return EXIT_USAGE;
            }
            finish(config.task.execute())
        }
        Command::Validate(args) => {
            let diagnostics = match ExperimentConfig::load(&args.config) {
                Ok(c) => diagnose(&c.task),
                Err(e) => vec![Diagnostic::new("config", e.to_string())],
            };
            for d in &diagnostics {
                println!("{d}");
            }
            if diagnostics.is_empty() {
                println!("ok");
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
    }
}

fn finish(result: Result<tasks::Outcome, Error>) -> i32 {
    match result {
        Ok(tasks::Outcome::Success) => EXIT_OK,
        Ok(tasks::Outcome::Failed(msg)) => {
            eprintln!("failed: {msg}");
            EXIT_FAILED
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
