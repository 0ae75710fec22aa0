//! Command line, config files and their merge.
//!
//! Precedence per field: command-line flag (or environment), then the JSON
//! config file, then the built-in default.

use std::path::PathBuf;

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::numbers::list_or_string;

#[derive(Parser, Debug, Clone)]
#[command(name = "triconfig", version, about = "Configuration-counting experiments on fractal measures and point sets")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// JSON experiment description; flags given on the command line win.
    #[arg(long, global = true)]
    pub config_file: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// CSV destination; stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// JSON run report destination.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Worker cap; 0 uses every core.
    #[arg(long, global = true, env = "TRICONFIG_THREADS")]
    pub threads: Option<usize>,
    /// Run every kernel on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[arg(long, global = true)]
    pub max_atoms: Option<usize>,
    #[arg(long, global = true)]
    pub max_grid_cells: Option<usize>,
    #[arg(long, global = true)]
    pub max_seconds: Option<f64>,
    /// No human-readable summary on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    /// Write the atoms of a measure or point set.
    Generate(GenerateArgs),
    /// Riesz s-energy of a measure.
    Energy(EnergyArgs),
    /// Upper Frostman ratio over atom-centred balls.
    Frostman(FrostmanArgs),
    /// Triple-annulus mass at each eps.
    AnnulusMass(AnnulusMassArgs),
    /// Triple-annulus mass against the mollified trilinear form.
    Trilinear(TrilinearArgs),
    /// Histogram of the configuration measure.
    ConfigDensity(ConfigDensityArgs),
    /// Distance-measure density at t for each eps.
    DistanceDensity(DistanceDensityArgs),
    /// L1-over-Sobolev ratios of the bilinear operator.
    BilinearBound(BilinearBoundArgs),
    /// Kernel transform or circle-measure transform samples.
    KernelDump(KernelDumpArgs),
    /// Approximately congruent labeled triangles.
    Count(CountArgs),
    /// Distinct distances and triangle classes.
    Distinct(DistinctArgs),
    /// Congruent-triangle growth exponent over a point-set family.
    Corollary(CorollaryArgs),
    /// Triple-mass scaling of the shifted Cantor product.
    Sharpness(SharpnessArgs),
    /// Run the built-in exact checks.
    Selftest,
}

impl Command {
    pub fn name(&self) -> String {
        match serde_json::to_value(self).ok().and_then(|v| v.get("command").and_then(Value::as_str).map(str::to_owned)) {
            Some(s) => s,
            None => "unknown".into(),
        }
    }
}

/// Point-generator knobs; absent values take the generator defaults.
#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GenArgs {
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Side lengths for `repeated-triangle`.
    #[arg(long)]
    pub triangle: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SourceArgs {
    /// Measure file: `x y [w]` lines or the CSV written by `generate`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// mattila | cantor | grid | random-uniform | cantor-product | cluster | repeated-triangle
    #[arg(long, default_value = "mattila")]
    pub source: String,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.75)]
    pub beta: f64,
    #[arg(long, default_value_t = 4)]
    pub level: u32,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GenArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GenerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EnergyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    /// Energy exponents.
    #[arg(long, default_value = "1")]
    #[serde(deserialize_with = "list_or_string")]
    pub s: String,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct FrostmanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 1.75)]
    pub s: f64,
    #[arg(long, default_value = "2^-2..2^-5")]
    #[serde(deserialize_with = "list_or_string")]
    pub scales: String,
    /// Center cap; 0 selects the default.
    #[arg(long, default_value_t = 0)]
    pub max_centers: usize,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct AnnulusMassArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[arg(long = "t", default_value = "1,1,1")]
    #[serde(deserialize_with = "list_or_string")]
    pub t: String,
    #[arg(long, default_value = "2^-3..2^-5")]
    #[serde(deserialize_with = "list_or_string")]
    pub eps: String,
    /// Also evaluate the all-triples sum.
    #[arg(long)]
    pub brute: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct TrilinearArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[arg(long = "t", default_value = "1,1,1")]
    #[serde(deserialize_with = "list_or_string")]
    pub t: String,
    #[arg(long, default_value = "2^-3..2^-5")]
    #[serde(deserialize_with = "list_or_string")]
    pub eps: String,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ConfigDensityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 0.0625)]
    pub bin_width: f64,
    /// `lo,hi` cube in side-length space; default `[0, diameter]^3`.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, default_value_t = 1 << 24)]
    pub max_bins: usize,
    /// Regularity margin for the reported sup density.
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct DistanceDensityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: SourceArgs,
    #[arg(long = "t", default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value = "2^-3..2^-6")]
    #[serde(deserialize_with = "list_or_string")]
    pub eps: String,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct BilinearBoundArgs {
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Number of seeded random pairs.
    #[arg(long, default_value_t = 20)]
    pub pairs: usize,
    #[arg(long, default_value_t = 4.0)]
    pub freq_cap: f64,
    #[arg(long, default_value_t = 6)]
    pub terms: usize,
    /// Side of the square window carrying each test function.
    #[arg(long, default_value_t = 2.0)]
    pub side: f64,
    #[arg(long, default_value = "2^-2..2^-5")]
    #[serde(deserialize_with = "list_or_string")]
    pub eps: String,
    #[arg(long, default_value_t = 0.5)]
    pub beta1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta2: f64,
    /// Grid spacing.
    #[arg(long, default_value_t = 0.015625)]
    pub h: f64,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct KernelDumpArgs {
    /// k-hat | sigma-hat
    #[arg(long, default_value = "k-hat")]
    pub what: String,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// both | plus | minus
    #[arg(long, default_value = "both")]
    pub branch: String,
    #[arg(long, default_value = "0,0")]
    #[serde(deserialize_with = "list_or_string")]
    pub eta: String,
    #[arg(long, default_value_t = 8.0)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 17)]
    pub samples: usize,
    /// Add the direct quadrature and its difference.
    #[arg(long)]
    pub quadrature: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct CountArgs {
    #[arg(long, default_value = "grid")]
    pub kind: String,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long = "t", default_value = "0.5,0.5,sqrt(2)/2")]
    #[serde(deserialize_with = "list_or_string")]
    pub t: String,
    /// Number or `auto` for `n^{-4/7 - b}`.
    #[arg(long, default_value = "auto")]
    #[serde(deserialize_with = "list_or_string")]
    pub delta: String,
    #[arg(long, default_value_t = 0.01)]
    pub b: f64,
    /// Also run the brute-force count and compare.
    #[arg(long)]
    pub brute: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GenArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct DistinctArgs {
    #[arg(long, default_value = "grid")]
    pub kind: String,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub resolution: f64,
    /// Also count congruence classes of triangles.
    #[arg(long)]
    pub triangles: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GenArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct CorollaryArgs {
    #[arg(long, default_value = "grid")]
    pub kind: String,
    #[arg(long, default_value = "1024,4096,16384")]
    #[serde(deserialize_with = "list_or_string")]
    pub sizes: String,
    #[arg(long, default_value_t = 0.01)]
    pub b: f64,
    #[arg(long = "t", default_value = "0.5,0.5,sqrt(2)/2")]
    #[serde(deserialize_with = "list_or_string")]
    pub t: String,
    #[arg(long, default_value_t = 1.76)]
    pub s: f64,
    #[arg(long, default_value_t = 50.0)]
    pub cap: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub gen: GenArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.75)]
    pub beta: f64,
    #[arg(long, default_value_t = 6)]
    pub level: u32,
    #[arg(long, alias = "eps-list", default_value = "2^-3..2^-6")]
    #[serde(deserialize_with = "list_or_string")]
    pub eps: String,
    /// Target side lengths `t12,t13,t23`.
    #[arg(long, default_value = "1,1,sqrt(2)")]
    #[serde(deserialize_with = "list_or_string")]
    pub config: String,
    /// Also fit the unit-annulus pair mass around the atom nearest the origin.
    #[arg(long)]
    pub pair_fit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    pub max_atoms: usize,
    pub max_grid_cells: usize,
    pub max_seconds: f64,
}

impl Default for Caps {
    fn default() -> Self {
        let l = triconfig::Limits::default();
        Caps { max_atoms: l.max_atoms, max_grid_cells: l.max_grid_cells, max_seconds: 86_400.0 }
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub caps: Caps,
    #[serde(flatten)]
    pub command: Command,
}

/// Process-level settings that do not affect results.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub report: Option<PathBuf>,
    pub threads: Option<usize>,
    pub sequential: bool,
    pub quiet: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    command: Option<String>,
    seed: Option<u64>,
    output: Option<PathBuf>,
    #[serde(default)]
    caps: CapsFile,
    params: Option<Map<String, Value>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CapsFile {
    max_atoms: Option<usize>,
    max_grid_cells: Option<usize>,
    max_seconds: Option<f64>,
}

fn from_command_line(m: &ArgMatches, id: &str) -> bool {
    matches!(m.value_source(id), Some(ValueSource::CommandLine | ValueSource::EnvVariable))
}

/// Overlays config-file params onto `cmd` wherever the flag was not given.
fn merge(cmd: &Command, sub: &ArgMatches, file: Option<&Map<String, Value>>) -> CliResult<Command> {
    let mut v = serde_json::to_value(cmd)?;
    let Some(file) = file else { return Ok(cmd.clone()) };
    let name = cmd.name();
    let params = match v.get_mut("params") {
        Some(Value::Object(p)) => p,
        _ if file.is_empty() => return Ok(cmd.clone()),
        _ => return Err(CliError::config(format!("`{name}` takes no params"))),
    };
    for (k, val) in file {
        if !params.contains_key(k) {
            let mut known: Vec<&String> = params.keys().collect();
            known.sort();
            return Err(CliError::config(format!("unknown param `{k}` for `{name}`; known: {known:?}")));
        }
        if !from_command_line(sub, k) {
            params.insert(k.clone(), val.clone());
        }
    }
    serde_json::from_value(v).map_err(|e| CliError::config(format!("params for `{name}`: {e}")))
}

/// Parses `argv` and merges any config file it names.
pub fn resolve<I, T>(argv: I) -> CliResult<(ExperimentConfig, RunOptions)>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = Cli::command().try_get_matches_from(argv).map_err(|e| CliError::Config(e.render().to_string()))?;
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Config(e.to_string()))?;
    resolve_parsed(cli, &matches)
}

fn resolve_parsed(cli: Cli, matches: &ArgMatches) -> CliResult<(ExperimentConfig, RunOptions)> {
    let g = &cli.global;
    let file: ExperimentFile = match &g.config_file {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read config file {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("config file {}: {e}", path.display())))?
        }
        None => ExperimentFile::default(),
    };

    let (cmd, sub) = match (&cli.command, matches.subcommand()) {
        (Some(cmd), Some((_, sub))) => (cmd.clone(), sub.clone()),
        _ => {
            let name = file.command.clone().ok_or_else(|| CliError::config("no subcommand given and the config file names none"))?;
            let m = Cli::command()
                .try_get_matches_from(["triconfig", name.as_str()])
                .map_err(|_| CliError::config(format!("unknown command `{name}` in config file")))?;
            let c = Cli::from_arg_matches(&m).map_err(|e| CliError::Config(e.to_string()))?;
            let sub = m.subcommand().expect("subcommand present").1.clone();
            (c.command.expect("subcommand present"), sub)
        }
    };
    if let Some(name) = &file.command {
        if *name != cmd.name() {
            return Err(CliError::config(format!("config file is for `{name}` but `{}` was requested", cmd.name())));
        }
    }
    let command = merge(&cmd, &sub, file.params.as_ref())?;

    let d = Caps::default();
    let caps = Caps {
        max_atoms: g.max_atoms.or(file.caps.max_atoms).unwrap_or(d.max_atoms),
        max_grid_cells: g.max_grid_cells.or(file.caps.max_grid_cells).unwrap_or(d.max_grid_cells),
        max_seconds: g.max_seconds.or(file.caps.max_seconds).unwrap_or(d.max_seconds),
    };
    let config = ExperimentConfig { seed: g.seed.or(file.seed).unwrap_or(0), output: g.output.clone().or(file.output), caps, command };
    config.validate()?;
    let opts = RunOptions { report: g.report.clone(), threads: g.threads, sequential: g.sequential, quiet: g.quiet };
    Ok((config, opts))
}

impl ExperimentConfig {
    /// Caps positive and every referenced input file present.
    pub fn validate(&self) -> CliResult<()> {
        let c = &self.caps;
        if c.max_atoms == 0 || c.max_grid_cells == 0 || !(c.max_seconds > 0.0) {
            return Err(CliError::config(format!("caps must be positive, got {c:?}")));
        }
        if let Some(src) = self.source() {
            if let Some(path) = &src.input {
                if !path.is_file() {
                    return Err(CliError::config(format!("input file {} does not exist", path.display())));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> Option<&SourceArgs> {
        Some(match &self.command {
            Command::Generate(a) => &a.source,
            Command::Energy(a) => &a.source,
            Command::Frostman(a) => &a.source,
            Command::AnnulusMass(a) => &a.source,
            Command::Trilinear(a) => &a.source,
            Command::ConfigDensity(a) => &a.source,
            Command::DistanceDensity(a) => &a.source,
            _ => return None,
        })
    }

    pub fn limits(&self) -> triconfig::Limits {
        triconfig::Limits { max_atoms: self.caps.max_atoms, max_grid_cells: self.caps.max_grid_cells }
    }
}
