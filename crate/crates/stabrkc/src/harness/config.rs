//! Layered option resolution: CLI flag > STABRKC_* environment variable >
//! config file (key=value lines) > built-in default.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Default, Clone)]
pub struct Layers {
    file: HashMap<String, String>,
}

impl Layers {
    pub fn from_file(path: Option<&Path>) -> Result<Self> {
        let mut file = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "config {path:?} line {}: expected key=value",
                        lineno + 1
                    ))
                })?;
                file.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Layers { file })
    }

    fn env_key(key: &str) -> String {
        format!("STABRKC_{}", key.to_uppercase().replace('-', "_"))
    }

    fn raw(&self, key: &str) -> Option<String> {
        if let Ok(v) = std::env::var(Self::env_key(key)) {
            return Some(v);
        }
        self.file.get(key).cloned()
    }

    /// Resolve a value: CLI wins, then env, then config file, then default.
    pub fn get<T>(&self, cli: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.get_opt(cli, key)?.unwrap_or(default))
    }

    pub fn get_opt<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        if cli.is_some() {
            return Ok(cli);
        }
        match self.raw(key) {
            Some(text) => text
                .parse::<T>()
                .map(Some)
                .map_err(|e| Error::InvalidParameter(format!("option `{key}` = `{text}`: {e}"))),
            None => Ok(None),
        }
    }

    /// Comma-separated list resolution with the same precedence.
    pub fn get_list<T>(&self, cli: Option<String>, key: &str) -> Result<Vec<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        let Some(text) = cli.or_else(|| self.raw(key)) else {
            return Ok(Vec::new());
        };
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<T>()
                    .map_err(|e| Error::InvalidParameter(format!("option `{key}` item `{s}`: {e}")))
            })
            .collect()
    }
}
