//! Parameter resolution: command-line flags override an optional
//! `key=value` config file, and the resolved union is what every output
//! embeds as its self-describing header.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::errors::CliError;

/// Parsed `key=value` config file; `#` starts a comment line.
#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<ConfigFile, CliError> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::invalid(format!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { entries })
    }

    fn lookup<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                CliError::invalid(format!("config value {key}={raw}: {e}"))
            }),
        }
    }

    /// Flag value, then config value, then the default.
    pub fn resolve<T: FromStr>(
        &self,
        cli: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        Ok(cli.or(self.lookup(key)?).unwrap_or(default))
    }

    /// Flag value or config value; an error if neither is present.
    pub fn resolve_required<T: FromStr>(&self, cli: Option<T>, key: &str) -> Result<T, CliError>
    where
        T::Err: Display,
    {
        cli.or(self.lookup(key)?)
            .ok_or_else(|| CliError::invalid(format!("missing required parameter --{key}")))
    }
}

/// Comma-separated integer list (used by flags like `--m 10,20,40`).
pub fn parse_u64_list(raw: &str) -> Result<Vec<u64>, CliError> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|e| CliError::invalid(format!("list entry {part:?}: {e}")))
        })
        .collect()
}

/// The resolved configuration embedded in every output. Keys inside
/// `params` are sorted by serde_json's map, so serialization is
/// deterministic.
pub fn config_json(command: &str, format: &str, entries: Vec<(&str, Value)>) -> Value {
    let mut params = serde_json::Map::new();
    for (key, value) in entries {
        params.insert(key.to_string(), value);
    }
    serde_json::json!({
        "command": command,
        "format": format,
        "params": Value::Object(params),
    })
}
