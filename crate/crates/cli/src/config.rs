//! Flag resolution: command-line flag, then config file, then default.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;

use crate::error::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "model",
    "h",
    "kappa",
    "alpha",
    "beta",
    "E",
    "F",
    "state",
    "post-measurement",
    "stage",
    "mode",
    "shots",
    "seed",
    "kappa-min",
    "kappa-max",
    "steps",
    "t",
    "out",
    "format",
    "starts",
    "outcome",
];

pub const SEED_ENV: &str = "QETLAB_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!("config line {}: expected key=value", n + 1)));
            };
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            let key = match key.as_str() {
                "e" | "big-e" => "E".to_string(),
                "f" | "big-f" => "F".to_string(),
                _ => key,
            };
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", n + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Flag value if given, else the parsed config value.
    pub fn get<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))))
            .transpose()
    }

    pub fn get_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|v| T::from_str(v, true).map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))))
            .transpose()
    }

    pub fn flag(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        if flag {
            return Ok(true);
        }
        Ok(self.get::<bool>(None, key)?.unwrap_or(false))
    }

    /// Seed precedence: flag, config file, `QETLAB_SEED`, built-in default.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        if let Some(seed) = self.get(flag, "seed")? {
            return Ok(seed);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|e| CliError::Usage(format!("{SEED_ENV}: {e}"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}
