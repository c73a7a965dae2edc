//! Command-line front end for the `abfringe` models.
//!
//! Each experiment reads a strict JSON configuration (units in key names),
//! runs, and writes a table as CSV or JSON. Exit codes: 0 on success, 2 for
//! configuration errors, 3 for numerical failures, 1 for I/O errors.

pub mod config;
mod error;
pub mod experiments;
pub mod table;

pub use config::{apply_override, Experiment, Format, RunConfig};
pub use error::CliError;
pub use table::{Cell, ResultTable};

use clap::{Parser, Subcommand};
use serde_json::Value;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "ABFRINGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "abfringe", version, about = "Time-dependent Aharonov-Bohm phase and interferometer experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON configuration file; the built-in example is used when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file (stdout when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Override a configuration value, e.g. `--set interferometer.D_cm=4`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Electric/magnetic phase cancellation for loops around a solenoid.
    Cancel,
    /// Faraday-law check on coaxial circles.
    Faraday,
    /// Bent-path geometry and phases of the three-crystal interferometer.
    Wb,
    /// Fringe phase over one period of the stray field.
    Sweep,
    /// Relativistic electron orbit in a uniform field.
    Trajectory,
    /// Print example configurations.
    Defaults {
        #[arg(value_enum)]
        experiment: Option<Experiment>,
    },
}

impl Command {
    fn experiment(&self) -> Option<Experiment> {
        match self {
            Command::Cancel => Some(Experiment::Cancel),
            Command::Faraday => Some(Experiment::Faraday),
            Command::Wb => Some(Experiment::Wb),
            Command::Sweep => Some(Experiment::Sweep),
            Command::Trajectory => Some(Experiment::Trajectory),
            Command::Defaults { .. } => None,
        }
    }
}

/// Reads the configuration for `exp`, applies overrides and validates.
pub fn load_config(
    exp: Experiment,
    path: Option<&Path>,
    overrides: &[String],
) -> Result<RunConfig, CliError> {
    let mut doc = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                CliError::Config(format!("cannot read {}: {e}", p.display()))
            })?;
            serde_json::from_str::<Value>(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => serde_json::to_value(RunConfig::example(exp)).expect("example serialises"),
    };
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| CliError::Config("configuration must be a JSON object".into()))?;
    match obj.get("experiment") {
        None => {
            obj.insert("experiment".into(), exp.as_str().into());
        }
        Some(v) if v.as_str() == Some(exp.as_str()) => {}
        Some(v) => {
            return Err(CliError::Config(format!(
                "configuration is for experiment {v}, but '{exp}' was requested"
            )))
        }
    }
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let cfg = RunConfig::from_value(doc)?;
    if cfg.experiment != exp {
        return Err(CliError::Config("overrides may not change the experiment".into()));
    }
    Ok(cfg)
}

pub fn execute(cfg: &RunConfig) -> Result<ResultTable, CliError> {
    match cfg.experiment {
        Experiment::Cancel => experiments::cancel(cfg),
        Experiment::Faraday => experiments::faraday(cfg),
        Experiment::Wb => experiments::wb(cfg),
        Experiment::Sweep => experiments::sweep(cfg),
        Experiment::Trajectory => experiments::trajectory(cfg),
    }
}

/// One example configuration, or all of them keyed by experiment.
pub fn emit_defaults(exp: Option<Experiment>) -> String {
    let value = match exp {
        Some(e) => serde_json::to_value(RunConfig::example(e)),
        None => {
            let mut map = serde_json::Map::new();
            for e in Experiment::ALL {
                map.insert(
                    e.as_str().into(),
                    serde_json::to_value(RunConfig::example(e)).expect("example serialises"),
                );
            }
            Ok(Value::Object(map))
        }
    }
    .expect("example serialises");
    let mut s = serde_json::to_string_pretty(&value).expect("value serialises");
    s.push('\n');
    s
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker threads: {e}")))
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "stdout".into(),
            source,
        }),
    }
}

/// Runs a parsed command line, writing results to `out` or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let Some(exp) = cli.command.experiment() else {
        let Command::Defaults { experiment } = &cli.command else {
            unreachable!()
        };
        return write_output(cli.out.as_deref(), &emit_defaults(*experiment), stdout);
    };
    let mut cfg = load_config(exp, cli.config.as_deref(), &cli.overrides)?;
    if let Some(f) = cli.format {
        cfg.output.format = f;
    }
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.display().to_string());
    }
    let table = thread_pool()?.install(|| execute(&cfg))?;
    let text = table.render(&cfg, cfg.output.format);
    write_output(cfg.output.path.as_deref().map(Path::new), &text, stdout)
}

/// Full entry point: parses `args`, runs, reports errors on `stderr` and
/// returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "abfringe: {e}");
            e.exit_code()
        }
    }
}
