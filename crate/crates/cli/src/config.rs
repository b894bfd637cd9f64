//! Run configuration: defaults, overlaid by the file named in `GRALG_CONFIG`,
//! then by `--config <file>`, then by individual command-line flags.

use crate::CliError;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::path::Path;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "GRALG_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Dimension, 3..=5.
    pub n: usize,
    pub seed: u64,
    /// Largest atom structure that may be built.
    pub atom_bound: usize,
    /// Random samples per sampled check.
    pub sample_count: usize,
    pub output: Output,
    /// Rounds of the network game.
    pub depth: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            n: 3,
            seed: 1,
            atom_bound: 5000,
            sample_count: 10_000,
            output: Output::Json,
            depth: 1,
        }
    }
}

/// Values given directly on the command line; `None` keeps the file value.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub atom_bound: Option<usize>,
    pub sample_count: Option<usize>,
    pub output: Option<Output>,
    pub depth: Option<usize>,
}

fn read_object(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(path.display(), format!("cannot read config: {e}")))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(CliError::input(
            path.display(),
            "config must be a JSON object",
        )),
        Err(e) => Err(CliError::input(
            path.display(),
            format!("malformed config: {e}"),
        )),
    }
}

impl Config {
    /// Resolve the configuration from every layer and validate it.
    pub fn load(explicit: Option<&Path>, overrides: &Overrides) -> Result<Config, CliError> {
        let Value::Object(mut merged) =
            serde_json::to_value(Config::default()).expect("config serializes")
        else {
            unreachable!("config is a struct")
        };
        let env_path = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty());
        for path in env_path
            .as_deref()
            .map(Path::new)
            .into_iter()
            .chain(explicit)
        {
            merged.extend(read_object(path)?);
        }
        let mut config: Config = serde_json::from_value(Value::Object(merged))
            .map_err(|e| CliError::input("config", e.to_string()))?;
        let o = overrides;
        config.n = o.n.unwrap_or(config.n);
        config.seed = o.seed.unwrap_or(config.seed);
        config.atom_bound = o.atom_bound.unwrap_or(config.atom_bound);
        config.sample_count = o.sample_count.unwrap_or(config.sample_count);
        config.output = o.output.unwrap_or(config.output);
        config.depth = o.depth.unwrap_or(config.depth);
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(gralg::atoms::MIN_DIMENSION..=gralg::atoms::MAX_DIMENSION).contains(&self.n) {
            return Err(CliError::input(
                "n",
                format!(
                    "dimension {} outside {}..={}",
                    self.n,
                    gralg::atoms::MIN_DIMENSION,
                    gralg::atoms::MAX_DIMENSION
                ),
            ));
        }
        if self.atom_bound == 0 {
            return Err(CliError::input("atom_bound", "must be positive"));
        }
        if self.sample_count == 0 {
            return Err(CliError::input("sample_count", "must be positive"));
        }
        Ok(())
    }
}
