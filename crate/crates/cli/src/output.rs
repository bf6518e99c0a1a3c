//! Deterministic table rendering shared by every subcommand.
//!
//! Every result is a rectangular table of strings. Numeric cells are
//! formatted once, through [`format_float`], and the resulting strings are
//! reused verbatim by both the CSV and the JSON writer — so the two formats
//! are guaranteed to carry identical values and identical invocations
//! produce byte-identical output.

use clap::ValueEnum;
use std::io::{self, Write};
use std::path::Path;

/// Output format selector for the `--format` flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// RFC-4180-style rows with a header line.
    Csv,
    /// A pretty-printed array of string-valued objects, keys in column order.
    Json,
}

/// Canonical float rendering: 17 significant digits, lowercase `e`
/// exponent, negative zero collapsed to zero.
pub fn format_float(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value:.16e}")
}

/// A rectangular table of pre-rendered cells.
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    /// An empty table with the given column names.
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends one row; width must match the header.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    /// Renders the table in the requested format, trailing newline included.
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(&self.columns)
            .expect("in-memory CSV write cannot fail");
        for row in &self.rows {
            writer
                .write_record(row)
                .expect("in-memory CSV write cannot fail");
        }
        let bytes = writer.into_inner().expect("in-memory CSV flush");
        String::from_utf8(bytes).expect("CSV output is UTF-8")
    }

    fn to_json(&self) -> String {
        let array: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = serde_json::Map::new();
                for (key, cell) in self.columns.iter().zip(row) {
                    object.insert(key.clone(), serde_json::Value::String(cell.clone()));
                }
                serde_json::Value::Object(object)
            })
            .collect();
        let mut text =
            serde_json::to_string_pretty(&array).expect("string-valued table serializes");
        text.push('\n');
        text
    }
}

/// Writes rendered output to the file, or to standard output.
pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(path) => std::fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}
