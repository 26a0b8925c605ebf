//! Flat `key = value` config files. Keys are flag names with or without the
//! leading dashes; `_` and `-` are interchangeable. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

/// Every key a config file may set.
pub const KEYS: &[&str] = &[
    "statistics",
    "variable",
    "r-start",
    "r-stop",
    "r-step",
    "a-start",
    "a-stop",
    "a-step",
    "omega",
    "n-max",
    "tail-tol",
    "outcome",
    "alpha",
    "beta",
    "format",
    "out",
    "r",
    "a",
    "s11",
    "s21",
    "phi",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches('-').replace('_', "-").to_ascii_lowercase()
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got `{line}`", k + 1)))?;
            let key = normalize_key(key);
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key `{key}`", k + 1)));
            }
            let value = value.trim().trim_matches('"').to_string();
            if values.insert(key.clone(), value).is_some() {
                return Err(CliError::Usage(format!("config line {}: key `{key}` set twice", k + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize_key(key)).map(String::as_str)
    }

    pub fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key `{}`: bad value `{v}`: {e}", normalize_key(key)))),
        }
    }

    /// The flag wins when given; otherwise the file value, if any.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }
}
