pub mod connectivity;
pub mod experiment;
pub mod optimal_q;
pub mod replication_plan;
pub mod resilience;
pub mod simulate;

use std::collections::BTreeSet;

use crate::config::ConfigFile;
use crate::errors::CliError;
use crate::output::OutputFormat;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: u64 = 500;

/// Resolves the output format from flag or config, defaulting to CSV.
pub fn resolve_format(
    cli: &Option<String>,
    file: &ConfigFile,
) -> Result<OutputFormat, CliError> {
    let name: String = file.resolve(cli.clone(), "format", "csv".to_string())?;
    name.parse::<OutputFormat>().map_err(CliError::Invalid)
}

/// Boolean flags: flag presence wins, otherwise the config value.
pub fn resolve_flag(cli: bool, file: &ConfigFile, key: &str) -> Result<bool, CliError> {
    if cli {
        return Ok(true);
    }
    file.resolve(None, key, false)
}

/// Inclusive evenly spaced sweep; a single step collapses to `from`.
pub fn sweep_f64(from: f64, to: f64, steps: u64) -> Result<Vec<f64>, CliError> {
    if steps < 1 {
        return Err(CliError::invalid("sweep needs at least one step"));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let delta = (to - from) / (steps - 1) as f64;
    Ok((0..steps).map(|i| from + delta * i as f64).collect())
}

/// Integer sweep: evenly spaced, rounded, deduplicated, order kept.
pub fn sweep_u64(from: u64, to: u64, steps: u64) -> Result<Vec<u64>, CliError> {
    let raw = sweep_f64(from as f64, to as f64, steps)?;
    let mut seen = BTreeSet::new();
    Ok(raw
        .into_iter()
        .map(|v| v.round() as u64)
        .filter(|v| seen.insert(*v))
        .collect())
}

/// Deduplicated regime warnings, printed to stderr after the run.
#[derive(Default)]
pub struct WarningSink {
    seen: BTreeSet<String>,
}

impl WarningSink {
    pub fn absorb<T>(&mut self, warned: qcomposite::asymptotic::Warned<T>) -> T {
        for warning in &warned.warnings {
            self.seen.insert(warning.to_string());
        }
        warned.value
    }

    pub fn flush(self) {
        for warning in self.seen {
            eprintln!("warning: {warning}");
        }
    }
}
