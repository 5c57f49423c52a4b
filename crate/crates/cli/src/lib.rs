//! Batch front end: one subcommand per experiment, reports in JSON and CSV.
//!
//! Exit status is 0 when every verdict passes, 2 when some inequality is
//! violated and 1 on configuration or operational errors.

pub mod commands;
pub mod config;

use std::path::Path;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;

pub use config::{Cli, ExperimentConfig, Format};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, values or config file.
    Config(String),
    /// A module operation failed.
    Op(liouville_core::Error),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(s) => write!(f, "ConfigInvalid: {s}"),
            CliError::Op(e) => write!(f, "{e}"),
            CliError::Io(s) => write!(f, "io error: {s}"),
        }
    }
}

impl From<liouville_core::Error> for CliError {
    fn from(e: liouville_core::Error) -> Self {
        CliError::Op(e)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Verdict { name: name.into(), pass, detail: detail.into() }
    }
}

/// What a subcommand hands back before it is wrapped in a report.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: serde_json::Value,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
    /// Plot-ready table; header line first.
    pub csv: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::Error => EXIT_ERROR,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub version: String,
    /// Only present when `--wall-time true`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    pub status: Status,
    pub results: serde_json::Value,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
    #[serde(skip)]
    pub csv: String,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Parses and validates the command line (with any `--config` file spliced in).
pub fn parse_config(args: &[String]) -> Result<(Cli, ExperimentConfig), CliError> {
    let args = config::expand_args(args)?;
    let cli = Cli::try_parse_from(&args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliError::Io(e.to_string()),
        _ => CliError::Config(e.to_string().trim_end().to_string()),
    })?;
    let (command, params) = commands::describe(&cli.command);
    let mut formats = cli.format.clone();
    formats.sort();
    formats.dedup();
    let cfg = ExperimentConfig {
        command,
        params,
        seed: cli.seed,
        precision_ceiling: config::resolve_precision(cli.prec_ceiling)?,
        output_dir: cli.out.as_ref().map(|p| p.display().to_string()),
        formats,
        wall_time: cli.wall_time,
    };
    Ok((cli, cfg))
}

/// Runs a validated configuration. Module errors end up in the report.
pub fn run(cli: &Cli, config: &ExperimentConfig) -> ExperimentReport {
    // core routines read their ceiling from the environment
    std::env::set_var(config::PREC_ENV, config.precision_ceiling.to_string());
    let start = Instant::now();
    let outcome = commands::dispatch(&cli.command, config);
    let elapsed = start.elapsed().as_secs_f64();
    let mut report = ExperimentReport {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: config.wall_time.then_some(elapsed),
        status: Status::Pass,
        results: serde_json::Value::Null,
        verdicts: vec![],
        warnings: vec![],
        error: None,
        csv: String::new(),
    };
    match outcome {
        Ok(o) => {
            report.status = if o.verdicts.iter().all(|v| v.pass) { Status::Pass } else { Status::Fail };
            report.results = o.results;
            report.verdicts = o.verdicts;
            report.warnings = o.warnings;
            report.csv = o.csv;
        }
        Err(e) => {
            report.status = Status::Error;
            report.error = Some(e.to_string());
        }
    }
    report
}

/// Writes `report.json`, the CSV table and `config.cfg` into `dir`.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let formats = &report.config.formats;
    if formats.contains(&Format::Json) {
        std::fs::write(dir.join("report.json"), report.to_json()).map_err(io)?;
    }
    if formats.contains(&Format::Csv) && !report.csv.is_empty() {
        let name = format!("{}.csv", report.config.command.replace(' ', "-"));
        std::fs::write(dir.join(name), &report.csv).map_err(io)?;
    }
    std::fs::write(dir.join("config.cfg"), report.config.to_flat()).map_err(io)?;
    Ok(())
}

/// Full command-line entry point; returns the exit status.
pub fn main_with_args(args: &[String]) -> i32 {
    let (cli, cfg) = match parse_config(args) {
        Ok(x) => x,
        Err(CliError::Io(help)) => {
            print!("{help}");
            return EXIT_PASS;
        }
        Err(e) => {
            eprintln!("{e}");
            return EXIT_ERROR;
        }
    };
    let report = run(&cli, &cfg);
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match &cli.out {
        Some(dir) => {
            if let Err(e) = write_report(&report, dir) {
                eprintln!("{e}");
                return EXIT_ERROR;
            }
        }
        None => {
            if cfg.formats.contains(&Format::Json) {
                print!("{}", report.to_json());
            }
            if cfg.formats.contains(&Format::Csv) {
                print!("{}", report.csv);
            }
        }
    }
    report.status.exit_code()
}
