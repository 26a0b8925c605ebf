//! Tabular run reports with a provenance header, rendered as CSV or JSON.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::ser::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};

pub const REPORT_SCHEMA: &str = "rindler.report/1";
pub const GENERATOR: &str = "rindler";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Num(_) | Cell::Empty => s.serialize_none(),
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

/// Shortest round-trip representation, exponent form for very small or large
/// magnitudes.
pub fn format_f64(v: f64) -> String {
    // drop the sign of negative zero
    format!("{:?}", if v == 0.0 { 0.0 } else { v })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub description: String,
}

impl Column {
    pub fn new(name: &str, description: &str) -> Self {
        Self { name: name.into(), description: description.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub timestamp: String,
    pub parameters: Vec<(String, String)>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, Cell)>,
}

impl RunReport {
    pub fn new(command: &str, parameters: Vec<(String, String)>, columns: Vec<Column>) -> Self {
        Self {
            command: command.into(),
            version: VERSION.into(),
            timestamp: timestamp(),
            parameters,
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_summary(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Numeric values of one column, `None` for empty cells.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64()).collect())
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {GENERATOR} {} {}\n", self.version, self.command));
        out.push_str(&format!("# schema: {REPORT_SCHEMA}\n"));
        out.push_str(&format!("# timestamp: {}\n", self.timestamp));
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push_str(&format!("# parameters: {}\n", params.join(" ")));
        let cols: Vec<String> = self.columns.iter().map(|c| format!("{} = {}", c.name, c.description)).collect();
        out.push_str(&format!("# columns: {}\n", cols.join("; ")));
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary: {k} = {}\n", v.csv()));
        }
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let params: Map<String, Value> =
            self.parameters.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let summary: Map<String, Value> =
            self.summary.iter().map(|(k, v)| (k.clone(), serde_json::to_value(v).unwrap_or(Value::Null))).collect();
        let columns: Vec<Value> =
            self.columns.iter().map(|c| json!({ "name": c.name, "description": c.description })).collect();
        json!({
            "schema": REPORT_SCHEMA,
            "generator": { "name": GENERATOR, "version": self.version },
            "command": self.command,
            "timestamp": self.timestamp,
            "parameters": params,
            "columns": columns,
            "rows": self.rows,
            "summary": summary,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// RFC 3339 time of the run, taken from `SOURCE_DATE_EPOCH` when set.
pub fn timestamp() -> String {
    use chrono::{DateTime, SecondsFormat, Utc};
    let when = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    when.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Writes to `out`, or stdout when absent.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    use std::io::Write;
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}
