//! Rendering of command results as JSON or CSV.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use serde_json::Value;

/// Significant digits kept when printing floats.
const FLOAT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// One CSV cell. Text cells (which include every exact rational) are quoted.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => format!("\"{}\"", s.replace('"', "\"\"")),
        }
    }
}

pub fn text(s: impl Into<String>) -> Cell {
    Cell::Text(s.into())
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::render).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

/// What a command produced, and whether its own checks held.
pub struct Report {
    pub command: &'static str,
    pub json: Value,
    pub table: Table,
    pub ok: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut v = self.json.clone();
                round_floats(&mut v);
                let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.table.render(),
        }
    }
}

fn round_to_digits(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", FLOAT_DIGITS - 1, x).parse().unwrap_or(x)
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{:.*e}", FLOAT_DIGITS - 1, x)
    } else {
        x.to_string()
    }
}

/// Rounds every non-integer number in place so output is stable across
/// platforms that differ in the last bits.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_to_digits).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Where to write: an explicit path, a file in the default output
/// directory, or standard output.
pub fn destination(output: Option<PathBuf>, out_dir: Option<PathBuf>, command: &str, format: Format) -> Option<PathBuf> {
    output.or_else(|| out_dir.map(|d| d.join(format!("{command}.{}", format.extension()))))
}

pub fn emit(body: &str, dest: Option<&Path>) -> Result<()> {
    match dest {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            if path.is_dir() {
                bail!("output path {} is a directory", path.display());
            }
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}
