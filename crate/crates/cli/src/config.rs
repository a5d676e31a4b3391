//! Run configuration: a strict TOML document naming one experiment, its parameters, the master
//! seed, the output target and an optional sweep grid.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::registry::Registry;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub parameters: toml::Table,
    /// Parameter name to the values it takes in a sweep.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub grid: BTreeMap<String, Vec<toml::Value>>,
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        Self { experiment: experiment.into(), seed, output: OutputSpec::default(), parameters: toml::Table::new(), grid: BTreeMap::new() }
    }

    /// Parse and validate against the registry. Errors name the offending key and its line.
    pub fn from_toml(src: &str, registry: &Registry) -> Result<Self> {
        if src.trim().is_empty() {
            return Err(CliError::Usage("config is empty; it must at least set `experiment` and `seed`".into()));
        }
        let cfg: Self = toml::from_str(src).map_err(|e| toml_error(src, &e, None))?;
        check_seed(cfg.seed)?;
        let exp = registry.get(&cfg.experiment).ok_or_else(|| CliError::Config {
            message: format!("unknown experiment `{}`; known: {}", cfg.experiment, registry.names().join(", ")),
            key: Some("experiment".into()),
            line: locate_key(src, None, "experiment"),
        })?;
        exp.check_source(src).map_err(|e| toml_error(src, &e, Some("parameters")))?;
        for (key, values) in &cfg.grid {
            if values.is_empty() {
                return Err(CliError::Config { message: "grid axis has no values".into(), key: Some(format!("grid.{key}")), line: locate_key(src, Some("grid"), key) });
            }
            for v in values {
                let mut params = cfg.parameters.clone();
                params.insert(key.clone(), v.clone());
                if let Err(e) = exp.resolve(&params) {
                    return Err(CliError::Config { message: e.message().to_string(), key: Some(format!("grid.{key}")), line: locate_key(src, Some("grid"), key) });
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config tables always serialise")
    }

    /// Copy with every parameter default filled in.
    pub fn resolved(&self, registry: &Registry) -> Result<Self> {
        let exp = registry.get(&self.experiment).ok_or_else(|| CliError::config(format!("unknown experiment `{}`", self.experiment)))?;
        let parameters = exp.resolve(&self.parameters).map_err(|e| params_error(&e))?;
        Ok(Self { parameters, ..self.clone() })
    }

    /// SHA-256 of the serialised config, hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_toml().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// TOML integers are signed, so seeds above i64::MAX cannot round-trip.
pub fn check_seed(seed: u64) -> Result<()> {
    if seed > i64::MAX as u64 {
        return Err(CliError::Config { message: format!("seed {seed} exceeds {}", i64::MAX), key: Some("seed".into()), line: None });
    }
    Ok(())
}

pub(crate) fn params_error(e: &toml::de::Error) -> CliError {
    CliError::Config { message: e.message().to_string(), key: backticked(e.message()).map(|k| format!("parameters.{k}")), line: None }
}

fn toml_error(src: &str, e: &toml::de::Error, section: Option<&str>) -> CliError {
    let line = e.span().map(|s| src[..s.start.min(src.len())].matches('\n').count() + 1);
    let named = backticked(e.message()).filter(|_| e.message().starts_with("unknown field") || e.message().starts_with("missing field"));
    let key = named.or_else(|| line.and_then(|l| key_on_line(src, l)));
    let key = match (section, key) {
        (Some(s), Some(k)) => Some(format!("{s}.{k}")),
        (_, k) => k,
    };
    let line = line.or_else(|| key.as_deref().and_then(|k| locate_key(src, section, k.rsplit('.').next().unwrap_or(k))));
    CliError::Config { message: e.message().to_string(), key, line }
}

fn backticked(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

fn key_on_line(src: &str, line: usize) -> Option<String> {
    let text = src.lines().nth(line - 1)?;
    let (k, _) = text.split_once('=')?;
    let k = k.trim().trim_matches('"');
    (!k.is_empty()).then(|| k.to_string())
}

/// 1-based line of `key = …` inside `[section]`, or at top level when `section` is None.
pub fn locate_key(src: &str, section: Option<&str>, key: &str) -> Option<usize> {
    let mut current: Option<String> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(name.trim().to_string());
            continue;
        }
        if current.as_deref() != section {
            continue;
        }
        if let Some((k, _)) = line.split_once('=') {
            if k.trim().trim_matches('"') == key {
                return Some(i + 1);
            }
        }
    }
    None
}
