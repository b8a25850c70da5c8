//! Flag parsing and `--config` file merging. Flags override file values,
//! which override the defaults (the unit-parameter, k = 1/2 problem).

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use exec_hyper::ModelParams;

use crate::CliError;

pub const DEFAULT_N_SAMPLES: usize = 201;
const DEFAULT_K: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Trajectory,
    SweepK,
    Verify,
    ShootPlot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    pub params: ModelParams,
    pub n_samples: usize,
    pub k_list: Vec<f64>,
    /// `None` writes to standard output.
    pub output: Option<PathBuf>,
    /// `None` picks the command's natural format.
    pub format: Option<Format>,
}

impl CliConfig {
    pub fn new(command: Command, params: ModelParams) -> Self {
        Self { command, params, n_samples: DEFAULT_N_SAMPLES, k_list: Vec::new(), output: None, format: None }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Solve | Command::Verify => Format::Json,
            Command::Trajectory | Command::SweepK | Command::ShootPlot => Format::Csv,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.command == Command::SweepK {
            if self.k_list.is_empty() {
                return Err(CliError::validation("k-list", "must contain at least one k for sweep-k"));
            }
            for &k in &self.k_list {
                ModelParams { k, ..self.params }.validate()?;
            }
        } else {
            self.params.validate()?;
        }
        if self.n_samples < 3 {
            return Err(CliError::validation("n-samples", format!("{} is below the minimum of 3", self.n_samples)));
        }
        if self.command == Command::Verify && self.format() != Format::Json {
            return Err(CliError::validation("format", "verify emits JSON only"));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "exec-hyper", version, about = "Optimal liquidation under power-law market impact")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Solve for the terminal speed and emit the full report.
    Solve,
    /// Emit the sampled optimal path.
    Trajectory,
    /// Solve once per impact exponent and emit all paths on a shared grid.
    SweepK,
    /// Run every oracle and residual check; non-zero exit if any fails.
    Verify,
    /// Sample the shooting function around its root.
    ShootPlot,
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    eta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Initial holdings.
    #[arg(long = "X", global = true, allow_hyphen_values = true)]
    holdings: Option<f64>,
    /// Horizon.
    #[arg(long = "T", global = true, allow_hyphen_values = true)]
    horizon: Option<f64>,
    #[arg(long, global = true)]
    n_samples: Option<usize>,
    /// Comma-separated impact exponents for sweep-k.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    k_list: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// JSON file with any of the above keys; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lambda: Option<f64>,
    pub sigma: Option<f64>,
    pub eta: Option<f64>,
    pub gamma: Option<f64>,
    pub k: Option<f64>,
    #[serde(rename = "X")]
    pub holdings: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    #[serde(alias = "n-samples")]
    pub n_samples: Option<usize>,
    #[serde(alias = "k-list")]
    pub k_list: Option<Vec<f64>>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

pub enum ParseOutcome {
    /// Usage error or help/version request, rendered by clap.
    Clap(clap::Error),
    Cli {
        error: CliError,
        json: bool,
    },
}

fn build(cli: Cli) -> Result<CliConfig, ParseOutcome> {
    let a = cli.common;
    let json_requested = a.format == Some(Format::Json);
    let file = match &a.config {
        Some(path) => FileConfig::load(path).map_err(|error| ParseOutcome::Cli { error, json: json_requested })?,
        None => FileConfig::default(),
    };
    let pick = |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
    let params = ModelParams {
        gamma: pick(a.gamma, file.gamma, 0.0),
        eta: pick(a.eta, file.eta, 1.0),
        lam: pick(a.lambda, file.lambda, 1.0),
        sigma: pick(a.sigma, file.sigma, 1.0),
        k: pick(a.k, file.k, DEFAULT_K),
        holdings: pick(a.holdings, file.holdings, 1.0),
        horizon: pick(a.horizon, file.horizon, 1.0),
    };
    let command = match cli.command {
        Cmd::Solve => Command::Solve,
        Cmd::Trajectory => Command::Trajectory,
        Cmd::SweepK => Command::SweepK,
        Cmd::Verify => Command::Verify,
        Cmd::ShootPlot => Command::ShootPlot,
    };
    Ok(CliConfig {
        command,
        params,
        n_samples: a.n_samples.or(file.n_samples).unwrap_or(DEFAULT_N_SAMPLES),
        k_list: a.k_list.or(file.k_list).unwrap_or_default(),
        output: a.output.or(file.output),
        format: a.format.or(file.format),
    })
}

pub fn parse_args<I, T>(args: I) -> Result<CliConfig, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(ParseOutcome::Clap)?;
    build(cli)
}
