//! Table rendering: CSV with a commented config header for plotting
//! tools, or a JSON document mirroring it. Identical config and seed
//! always produce byte-identical output.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde_json::Value;

use crate::errors::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }

    fn extension(self) -> &'static str {
        self.name()
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Numbers in full-precision decimal; empty cell for null.
fn csv_cell(value: &Value) -> String {
    match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render_csv(config: &Value, table: &Table) -> String {
    let mut out = String::new();
    out.push_str("# config: ");
    out.push_str(&config.to_string());
    out.push('\n');
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(csv_cell).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(config: &Value, table: &Table) -> String {
    let doc = serde_json::json!({
        "config": config,
        "columns": table.columns,
        "rows": table.rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
    text.push('\n');
    text
}

/// Writes the table to `<out>/<name>.<ext>`, or to stdout when no
/// output directory was given.
pub fn emit(
    out_dir: Option<&Path>,
    name: &str,
    format: OutputFormat,
    config: &Value,
    table: &Table,
) -> Result<(), CliError> {
    let rendered = match format {
        OutputFormat::Csv => render_csv(config, table),
        OutputFormat::Json => render_json(config, table),
    };
    match out_dir {
        None => {
            std::io::stdout().write_all(rendered.as_bytes())?;
            Ok(())
        }
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("{name}.{}", format.extension()));
            std::fs::write(&path, rendered)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

/// Converts an f64 into a JSON value, mapping non-finite to null.
pub fn num(value: f64) -> Value {
    serde_json::Number::from_f64(value)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}
