//! Flag definitions, config-file expansion and the resolved [`ExperimentConfig`].

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::CliError;

/// Fallback precision ceiling in bits when neither the flag nor the
/// environment sets one.
pub const DEFAULT_PREC_CEILING: u32 = 4096;
pub const PREC_ENV: &str = "LIOUVILLE_PREC_CEILING";

#[derive(Parser, Debug)]
#[command(name = "liouville", version, about = "Liouville-type inequality experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Master seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Precision ceiling in bits; defaults to $LIOUVILLE_PREC_CEILING or 4096.
    #[arg(long = "prec-ceiling", global = true)]
    pub prec_ceiling: Option<u32>,
    /// Directory for report files; the JSON report goes to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_delimiter = ',', default_value = "json")]
    pub format: Vec<Format>,
    /// Flat key=value file mirroring the flags; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Record the wall time in the report (breaks byte-identity between runs).
    #[arg(long = "wall-time", global = true, default_value_t = false, action = ArgAction::Set)]
    pub wall_time: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weil height of a projective point.
    Height(HeightArgs),
    /// Exhaustive Liouville inequality checks.
    #[command(subcommand)]
    Liouville(LiouvilleCommand),
    /// Archimedean and p-adic small-value measures.
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// S_a deficiency scans and Borel–Cantelli series.
    #[command(subcommand)]
    Satype(SatypeCommand),
    /// Dirichlet and Siegel polynomial constructions.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Rational points of bounded height on analytic images.
    #[command(subcommand)]
    Count(CountCommand),
}

#[derive(Subcommand, Debug)]
pub enum LiouvilleCommand {
    /// Exhaustive check of log|P(p)| ≥ −[K(p):Q]·h(p)·(log‖P‖ + d).
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
pub enum MeasureCommand {
    /// Area of {|P| ≤ ε‖P‖_r} in the disk of radius r.
    Area(AreaArgs),
    /// Exact p-adic measure of {|P|_p ≤ p^{−m}‖P‖}.
    Padic(PadicArgs),
    /// Replay of the interpolation argument on a sublevel set.
    Replay(ReplayArgs),
}

#[derive(Subcommand, Debug)]
pub enum SatypeCommand {
    /// Required constants over a (degree, height) grid.
    Scan(ScanArgs),
    /// Scan and compare every cell with a fixed constant.
    Test(TestArgs),
    /// Partial sums and tail bound of the Borel–Cantelli series.
    Series(SeriesArgs),
    /// Scans at random points of the unit polydisk.
    Survey(SurveyArgs),
}

#[derive(Subcommand, Debug)]
pub enum LatticeCommand {
    /// Small values at a fixed point by scaled lattice reduction.
    Dirichlet(DirichletArgs),
    /// Small integer polynomial vanishing on rational points.
    Siegel(SiegelArgs),
}

#[derive(Subcommand, Debug)]
pub enum CountCommand {
    /// Rational parameters in the disk whose image has height ≤ T.
    Points(PointsArgs),
    /// Counts, auxiliary sections and Jensen ceilings over a T grid.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct HeightArgs {
    /// Projective point, e.g. "[1:2:3]" or "[1:root(-2,0,1;1.414)]".
    #[arg(long)]
    pub point: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    /// Projective point, or "reference" for the built-in list of ten.
    #[arg(long)]
    pub point: String,
    #[arg(long, default_value_t = 5)]
    pub dmax: u32,
    #[arg(long, default_value_t = 20)]
    pub hmax: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AreaMethodArg {
    MonteCarlo,
    Grid,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct AreaArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value = "1")]
    pub r: String,
    #[arg(long, value_delimiter = ',', default_value = "1e-3")]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, value_enum, default_value_t = AreaMethodArg::MonteCarlo)]
    pub method: AreaMethodArg,
    /// Grid side for the quadrature method.
    #[arg(long, default_value_t = 512)]
    pub grid: u32,
    /// Constant C of the bound C·d·ε^{2/d}; no bound verdict when absent.
    #[arg(long)]
    pub c: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PadicArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub m: u32,
    /// Minimal resolution exponent of the reported fraction.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ReplayArgs {
    /// "exp" or an integer polynomial in z.
    #[arg(long, default_value = "exp")]
    pub series: String,
    /// Taylor terms kept for "exp".
    #[arg(long, default_value_t = 40)]
    pub terms: usize,
    #[arg(long, default_value = "3/10")]
    pub r0: String,
    #[arg(long, default_value = "3/5")]
    pub r1: String,
    #[arg(long, default_value_t = 0.9)]
    pub eps: f64,
    #[arg(long, default_value_t = 1)]
    pub beta: u32,
    #[arg(long, default_value_t = 3)]
    pub d: u32,
    #[arg(long, default_value_t = 20_000)]
    pub samples: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ScanArgs {
    /// One coordinate per flag: "pi", "e", "a/b" or "root(c0,…;re[,im])".
    #[arg(long = "coord", required = true)]
    pub coords: Vec<String>,
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    #[arg(long, default_value_t = 4)]
    pub dmax: u32,
    #[arg(long, default_value_t = 64)]
    pub hmax: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub scan: ScanArgs,
    /// The constant A of the S_a inequality.
    #[arg(long)]
    pub constant: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = 1.0)]
    pub b0: f64,
    #[arg(long, default_value_t = 3.0)]
    pub b1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b2: f64,
    #[arg(long, default_value_t = 2.0)]
    pub b3: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b4: f64,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[arg(long, default_value_t = 20)]
    pub dcut: u32,
    #[arg(long, default_value_t = 200)]
    pub hcut: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SurveyArgs {
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    #[arg(long = "a-grid", value_delimiter = ',', default_value = "0.5,1,2,4")]
    pub a_grid: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 3)]
    pub dmax: u32,
    #[arg(long, default_value_t = 16)]
    pub hmax: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DirichletArgs {
    #[arg(long = "coord", required = true)]
    pub coords: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub d: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "100")]
    pub t: Vec<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SiegelArgs {
    /// One point per flag, coordinates separated by commas: "1/2,3".
    #[arg(long = "point")]
    pub points: Vec<String>,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PointsArgs {
    /// Components separated by commas, e.g. "z, z^2" or "z, exp(z)".
    #[arg(long)]
    pub map: String,
    #[arg(long, default_value = "9/10")]
    pub r: String,
    /// Height cutoff: a number or "log(n)".
    #[arg(long, default_value = "log(5)")]
    pub t: String,
    #[arg(long, default_value = "exact-rational")]
    pub policy: String,
}

#[derive(Args, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExperimentArgs {
    #[arg(long)]
    pub map: String,
    #[arg(long, default_value = "9/10")]
    pub r: String,
    /// Jensen circle; (1 + r)/2 when absent.
    #[arg(long)]
    pub r1: Option<String>,
    /// Semicolon-separated T grid, each a number or "log(n)".
    #[arg(long, value_delimiter = ';', default_value = "log(5);log(20);log(100)")]
    pub t: Vec<String>,
    #[arg(long, default_value_t = 4.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 0.9)]
    pub eps0: f64,
    #[arg(long = "max-monomials", default_value_t = 300)]
    pub max_monomials: usize,
}

/// Everything a run depends on, after defaulting.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub precision_ceiling: u32,
    pub output_dir: Option<String>,
    pub formats: Vec<Format>,
    pub wall_time: bool,
}

impl ExperimentConfig {
    /// The config as `key = value` lines, accepted back by `--config`.
    pub fn to_flat(&self) -> String {
        let mut s = format!("command = {}\n", self.command);
        if let serde_json::Value::Object(m) = &self.params {
            for (k, v) in m {
                let key = if k == "coords" {
                    "coord"
                } else if k == "points" {
                    "point"
                } else {
                    k
                };
                match v {
                    serde_json::Value::Null => {}
                    serde_json::Value::Array(xs) if key == "coord" || key == "point" => {
                        for x in xs {
                            s.push_str(&format!("{key} = {}\n", scalar(x)));
                        }
                    }
                    serde_json::Value::Array(xs) => {
                        let sep = if key == "t" { ";" } else { "," };
                        let parts: Vec<String> = xs.iter().map(scalar).collect();
                        s.push_str(&format!("{key} = {}\n", parts.join(sep)));
                    }
                    v => s.push_str(&format!("{key} = {}\n", scalar(v))),
                }
            }
        }
        s.push_str(&format!("seed = {}\nprec-ceiling = {}\n", self.seed, self.precision_ceiling));
        s
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        v => v.to_string(),
    }
}

fn read_flat(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut out = vec![];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        let k = k.trim().trim_start_matches("--");
        if k == "config" {
            return Err(CliError::Config("config files cannot include other config files".into()));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn flag_name(tok: &str) -> Option<&str> {
    let name = tok.strip_prefix("--")?;
    Some(name.split_once('=').map_or(name, |(k, _)| k))
}

/// Splices `--config` file entries into the argument list. Subcommand words
/// come from the `command` key when the command line gives none; keys that
/// also appear as flags on the command line are dropped.
pub fn expand_args(args: &[String]) -> Result<Vec<String>, CliError> {
    let mut path: Option<String> = None;
    for (i, a) in args.iter().enumerate() {
        if a == "--config" {
            path = Some(args.get(i + 1).cloned().ok_or_else(|| CliError::Config("--config needs a path".into()))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(args.to_vec());
    };
    let entries = read_flat(Path::new(&path))?;
    let given: BTreeSet<&str> = args.iter().skip(1).filter_map(|a| flag_name(a)).collect();
    let mut split = 1;
    while split < args.len() && !args[split].starts_with('-') {
        split += 1;
    }
    let mut out: Vec<String> = args[..split].to_vec();
    for (k, v) in &entries {
        if k == "command" {
            if split == 1 {
                out.extend(v.split_whitespace().map(String::from));
            }
        } else if !given.contains(k.as_str()) {
            out.push(format!("--{k}"));
            out.push(v.clone());
        }
    }
    out.extend_from_slice(&args[split..]);
    Ok(out)
}

/// Ceiling from the flag, else the environment, else the default.
pub fn resolve_precision(flag: Option<u32>) -> Result<u32, CliError> {
    let c = match flag {
        Some(c) => c,
        None => match std::env::var(PREC_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| CliError::Config(format!("{PREC_ENV}={s:?} is not an integer")))?,
            Err(_) => DEFAULT_PREC_CEILING,
        },
    };
    if !(64..=1 << 20).contains(&c) {
        return Err(CliError::Config(format!("precision ceiling {c} outside [64, 2^20]")));
    }
    Ok(c)
}
