use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

/// Number type for the estimation layer of `verify`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    /// Binary floating point with `--precision` bits of mantissa.
    #[default]
    Hp,
    F64,
    /// Exact rationals throughout. Slow for large `n_max`.
    Exact,
}

#[derive(Debug, Parser)]
#[command(
    name = "plrs",
    version,
    about = "Legal decompositions and summand statistics for positive linear recurrences"
)]
pub struct Cli {
    /// Recurrence coefficients c_1,..,c_L, e.g. `1,1` for Fibonacci.
    #[arg(long, global = true)]
    pub coeffs: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// JSON run configuration; flags given on the command line take
    /// precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Largest `|Omega_n|` any enumeration may visit.
    #[arg(long, global = true, env = "PLRS_ENUM_CAP")]
    pub cap: Option<u64>,

    /// Mantissa bits of the high-precision scalar.
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    /// Worker threads for parallel sweeps (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase", deny_unknown_fields)]
pub enum Command {
    /// Print H_1..H_n.
    Seq { n: usize },
    /// Print the block catalog and the length of each Type 2 block.
    Blocks,
    /// Legal decomposition of a positive integer.
    Decompose { m: String },
    /// Check a coefficient string (most significant first) for legality.
    Validate { digits: String },
    /// List every element of Omega_n.
    Enumerate { n: usize },
    /// Coefficients of the summand polynomial P_n.
    Poly { n: usize },
    /// Exact moments of K_n.
    Stats { n: usize },
    /// Distribution of the second-to-last block size Z_n.
    Zdist {
        n: usize,
        /// Also tally Z_n over an enumeration of Omega_n.
        #[arg(long)]
        #[serde(default)]
        empirical: bool,
    },
    /// Exact checks of the conditional mean and second-moment identities.
    Identities {
        n: usize,
        /// Also check each conditional expectation against an enumeration.
        #[arg(long)]
        #[serde(default)]
        enumerate: bool,
    },
    /// Check Var[K_n] >= c n for every L < n <= n_max.
    Verify {
        #[arg(long, default_value_t = plrs::verify::DEFAULT_N_MAX)]
        #[serde(default = "default_n_max")]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = ScalarKind::Hp)]
        #[serde(default)]
        scalar: ScalarKind,
    },
    /// Skewness and excess kurtosis of K_n.
    Gauss {
        #[arg(long, value_delimiter = ',', default_values_t = [50usize, 100, 200, 400])]
        #[serde(default = "default_n_list")]
        n_list: Vec<usize>,
    },
    /// Uniform samples from Omega_n.
    Sample {
        n: usize,
        #[arg(long, default_value_t = 1000)]
        #[serde(default = "default_samples")]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        #[serde(default)]
        seed: u64,
    },
}

fn default_n_max() -> usize {
    plrs::verify::DEFAULT_N_MAX
}

fn default_n_list() -> Vec<usize> {
    vec![50, 100, 200, 400]
}

fn default_samples() -> usize {
    1000
}

/// Everything one invocation needs, after merging a config file with the
/// command line.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, deserialize_with = "coefficient_list")]
    pub coefficients: Option<String>,
    #[serde(skip)]
    pub command: Option<Command>,
    #[serde(default)]
    pub format: Format,
    pub cap: Option<u64>,
    pub precision: Option<u32>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Accepts `"2,2,0,2"` or `[2, 2, 0, 2]`.
fn coefficient_list<'de, D: serde::Deserializer<'de>>(
    deserializer: D,
) -> Result<Option<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Coefficients {
        Text(String),
        List(Vec<i64>),
    }
    Ok(
        Option::<Coefficients>::deserialize(deserializer)?.map(|c| match c {
            Coefficients::Text(text) => text,
            Coefficients::List(list) => list
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        }),
    )
}

const CONFIG_KEYS: [&str; 6] = [
    "coefficients",
    "format",
    "cap",
    "precision",
    "output",
    "threads",
];

impl RunConfig {
    /// Reads a flat JSON object: the global keys plus an optional `command`
    /// key with that subcommand's arguments alongside.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::from_json(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let mut rest: serde_json::Map<String, serde_json::Value> = serde_json::from_str(text)?;
        let globals: serde_json::Map<_, _> = CONFIG_KEYS
            .iter()
            .filter_map(|&k| rest.remove_entry(k))
            .collect();
        let mut config: RunConfig = serde_json::from_value(globals.into())?;
        if !rest.is_empty() {
            config.command = Some(serde_json::from_value(rest.into())?);
        }
        Ok(config)
    }

    /// Command-line values replace config values field by field.
    pub fn merge(cli: Cli) -> Result<Self, String> {
        let mut config = match &cli.config {
            Some(path) => Self::load(path)?,
            None => RunConfig::default(),
        };
        if cli.coeffs.is_some() {
            config.coefficients = cli.coeffs;
        }
        if cli.command.is_some() {
            config.command = cli.command;
        }
        if let Some(format) = cli.format {
            config.format = format;
        }
        config.cap = cli.cap.or(config.cap);
        config.precision = cli.precision.or(config.precision);
        config.output = cli.output.or(config.output);
        config.threads = cli.threads.or(config.threads);
        Ok(config)
    }
}
