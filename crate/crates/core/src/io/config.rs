use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::inverse::Method;
use crate::{Error, Result, Scenario};

/// Mesh, noise and solver settings; the `[run]` table of a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunOptions {
    /// Forward time step.
    pub dt: f64,
    /// Forward space step; `dt * max(1, v_max)` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    /// Combine runs at `dt` and `2 dt` into `2 k_dt - k_2dt` on the coarse mesh.
    pub richardson: bool,
    /// Inverse time step. Defaults to `noisy_dt_factor * sqrt(sigma)` for
    /// noisy data and ten forward steps otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverse_dt: Option<f64>,
    /// Inverse step of the exact-data companion run of `example`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_dt: Option<f64>,
    pub sigma: f64,
    pub seed: u64,
    pub noisy_dt_factor: f64,
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
    /// Spatial cells for distribution recovery; `T / inverse_dt` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_x: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            dt: 1e-3,
            dx: None,
            richardson: false,
            inverse_dt: None,
            exact_dt: None,
            sigma: 0.0,
            seed: 1,
            noisy_dt_factor: 10.0,
            method: Method::Explicit,
            tol: crate::inverse::DEFAULT_TOL,
            max_iter: crate::inverse::DEFAULT_MAX_ITER,
            n_x: None,
        }
    }
}

impl RunOptions {
    pub fn check(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("run.{name} must be > 0, got {v}")))
            }
        };
        positive("dt", self.dt)?;
        positive("noisy_dt_factor", self.noisy_dt_factor)?;
        positive("tol", self.tol)?;
        for (name, v) in [
            ("dx", self.dx),
            ("inverse_dt", self.inverse_dt),
            ("exact_dt", self.exact_dt),
        ] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if !(self.sigma >= 0.0) || !self.sigma.is_finite() {
            return Err(Error::Config(format!(
                "run.sigma must be >= 0, got {}",
                self.sigma
            )));
        }
        if self.max_iter == 0 || self.n_x == Some(0) {
            return Err(Error::Config(
                "run.max_iter and run.n_x must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A scenario plus run options, as stored in a config file.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub scenario: Scenario<f64>,
    pub run: RunOptions,
}

impl Config {
    pub fn new(scenario: Scenario<f64>, run: RunOptions) -> Self {
        Config { scenario, run }
    }
}

/// Reads and checks a config file, applying `key=value` overrides first.
pub fn parse_config(path: &Path, overrides: &[(String, Value)]) -> Result<Config> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text, overrides).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_config_str(text: &str, overrides: &[(String, Value)]) -> Result<Config> {
    if text.trim().is_empty() {
        return Err(Error::Parse("configuration is empty".into()));
    }
    let mut table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
    for (key, value) in overrides {
        set_path(&mut table, key, value.clone())?;
    }
    let input = table.clone();
    let run = match table.remove("run") {
        Some(v) => RunOptions::deserialize(v)
            .map_err(|e| Error::Config(format!("[run]: {}", e.message())))?,
        None => RunOptions::default(),
    };
    let scenario = Scenario::<f64>::deserialize(Value::Table(table))
        .map_err(|e| Error::Config(e.message().to_string()))?;
    let config = Config { scenario, run };
    let emitted = to_table(&config)?;
    if let Some(path) = first_unknown(&input, &emitted, "") {
        let leaf = path.rsplit('.').next().unwrap_or(&path);
        let line = text
            .lines()
            .position(|l| l.trim_start().split('=').next().map(str::trim) == Some(leaf))
            .map(|i| format!(" (line {})", i + 1))
            .unwrap_or_default();
        return Err(Error::Config(format!("unknown key `{path}`{line}")));
    }
    config.scenario.check()?;
    config.run.check()?;
    Ok(config)
}

fn to_table(config: &Config) -> Result<Table> {
    let mut table = Table::try_from(&config.scenario).map_err(|e| Error::Config(e.to_string()))?;
    let run = Table::try_from(&config.run).map_err(|e| Error::Config(e.to_string()))?;
    table.insert("run".into(), Value::Table(run));
    Ok(table)
}

pub fn emit_config(config: &Config) -> Result<String> {
    toml::to_string(&to_table(config)?).map_err(|e| Error::Config(e.to_string()))
}

/// First key present in `input` but not in `known`, as a dotted path.
fn first_unknown(input: &Table, known: &Table, prefix: &str) -> Option<String> {
    for (k, v) in input {
        let path = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match (v, known.get(k)) {
            (_, None) => return Some(path),
            (Value::Table(a), Some(Value::Table(b))) => {
                if let Some(p) = first_unknown(a, b, &path) {
                    return Some(p);
                }
            }
            _ => {}
        }
    }
    None
}

fn set_path(table: &mut Table, key: &str, value: Value) -> Result<()> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts
        .pop()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| Error::Config(format!("bad key `{key}`")))?;
    let mut cur = table;
    for p in parts {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("`{p}` in `{key}` is not a table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

/// Parses `key=value`; the value is read as a TOML value, or as a bare
/// string when it is not one.
pub fn parse_override(text: &str) -> Result<(String, Value)> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{text}` is not key=value")))?;
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    Ok((key.trim().to_string(), value))
}
