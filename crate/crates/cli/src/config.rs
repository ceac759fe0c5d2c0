//! Flat `key = value` settings.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! # comment
//! key = value        # trailing comments are allowed
//! ```
//!
//! Keys are case-sensitive; `-` and `_` are interchangeable. Command-line
//! flags override the file.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

pub fn canonical_key(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl Settings {
    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!("config line {}: expected key = value", k + 1)));
            };
            let key = canonical_key(key);
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::config(format!("config line {}: unknown key {key:?}", k + 1)));
            }
            if s.values.contains_key(&key) {
                return Err(CliError::config(format!("config line {}: duplicate key {key:?}", k + 1)));
            }
            s.values.insert(key, value.trim().to_string());
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(canonical_key(key), value.into());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::config(format!("{key} = {v:?}: {e}")))
            })
            .transpose()
    }

    /// Like [`Settings::get`], recording `default` when the key is unset so
    /// the settings describe the run completely.
    pub fn get_or<T: FromStr + fmt::Display>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        if self.raw(key).is_none() {
            self.set(key, default.to_string());
        }
        self.require(key)
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| CliError::config(format!("missing required setting {key}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Renders back to the file grammar.
    pub fn to_text(&self) -> String {
        self.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

/// Comma-separated list of numbers.
pub fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    v.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| CliError::config(format!("{key}: {x:?}: {e}")))
        })
        .collect()
}
