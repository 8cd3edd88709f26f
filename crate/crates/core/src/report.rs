//! Versioned JSON and CSV artifacts.
//!
//! JSON documents are objects carrying `schema_version` and `kind` next to
//! the payload fields. CSV tables start with a `schema_version` column;
//! floats use exponent notation.

use crate::error::{Error, Result};
use crate::SCHEMA_VERSION;
use serde::Serialize;
use std::fs::File;
use std::io::Write;
use std::path::Path;

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: &'static str,
    kind: &'a str,
    #[serde(flatten)]
    data: &'a T,
}

/// JSON value of `data` tagged with the schema version and `kind`.
///
/// `data` must serialize to an object.
pub fn to_json_value<T: Serialize>(kind: &str, data: &T) -> Result<serde_json::Value> {
    let v = serde_json::to_value(Versioned {
        schema_version: SCHEMA_VERSION,
        kind,
        data,
    })?;
    if !v.is_object() {
        return Err(Error::invalid("to_json_value", "payload must be a JSON object"));
    }
    Ok(v)
}

pub fn write_json<T: Serialize, W: Write>(mut w: W, kind: &str, data: &T) -> Result<()> {
    let v = to_json_value(kind, data)?;
    serde_json::to_writer_pretty(&mut w, &v)?;
    writeln!(w)?;
    Ok(())
}

pub fn write_json_path<T: Serialize>(path: impl AsRef<Path>, kind: &str, data: &T) -> Result<()> {
    write_json(File::create(path)?, kind, data)
}

/// CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Write a table with a leading `schema_version` column.
pub fn write_csv<W: Write>(w: W, headers: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut head = vec!["schema_version"];
    head.extend_from_slice(headers);
    out.write_record(&head)?;
    for row in rows {
        if row.len() != headers.len() {
            return Err(Error::DimensionMismatch {
                op: "write_csv",
                expected: headers.len(),
                got: row.len(),
            });
        }
        let mut rec = vec![SCHEMA_VERSION.to_string()];
        rec.extend(row.iter().map(Cell::render));
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv_path(path: impl AsRef<Path>, headers: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) -> Result<()> {
    write_csv(File::create(path)?, headers, rows)
}
