//! CSV and JSON file handling. Header names are `x1..xd` plus `y` for
//! training data; numbers are written in shortest round-trip form
//! (`{:?}`, which switches to exponent notation for very small values).

use std::fs;
use std::path::Path;

use gsk::{Dataset, Points};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{io_error, CliError, CliResult};

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

fn read_table(path: &Path) -> CliResult<Table> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    if text.trim().is_empty() {
        return Ok(Table { columns: Vec::new(), rows: Vec::new() });
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let columns: Vec<String> = reader
        .headers()
        .map_err(|e| io_error(path, format!("line 1: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            io_error(path, format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .zip(&columns)
            .map(|(field, name)| match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(io_error(
                    path,
                    format!("line {line}: column `{name}`: `{field}` is not a finite number"),
                )),
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

/// Number of leading `x1, x2, ...` columns.
fn input_columns(columns: &[String]) -> usize {
    columns
        .iter()
        .enumerate()
        .take_while(|(i, c)| **c == format!("x{}", i + 1))
        .count()
}

/// Training data with header `x1,...,xd,y`.
pub fn read_training(path: &Path) -> CliResult<Dataset> {
    let table = read_table(path)?;
    if table.columns.is_empty() {
        return Err(io_error(path, "line 1: empty file, expected header x1,...,xd,y"));
    }
    let d = input_columns(&table.columns);
    if d == 0 {
        return Err(io_error(path, "line 1: header must start with x1"));
    }
    if table.columns.len() != d + 1 || table.columns[d] != "y" {
        return Err(io_error(
            path,
            format!("line 1: missing `y` column after x1..x{d} (header: {})", table.columns.join(",")),
        ));
    }
    if table.rows.is_empty() {
        return Err(io_error(path, "no data rows"));
    }
    let mut x = Vec::with_capacity(table.rows.len() * d);
    let mut y = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        x.extend_from_slice(&row[..d]);
        y.push(row[d]);
    }
    Ok(Dataset::new(Points::new(x, d)?, y)?)
}

/// Prediction inputs with header `x1,...,xd` for a known `d`. An empty file
/// is zero rows.
pub fn read_inputs(path: &Path, dim: usize) -> CliResult<Points> {
    let table = read_table(path)?;
    if table.columns.is_empty() {
        return Ok(Points::empty(dim));
    }
    if input_columns(&table.columns) != dim || table.columns.len() != dim {
        return Err(io_error(
            path,
            format!(
                "line 1: expected header {} for a {dim}-dimensional model, got {}",
                header(dim).join(","),
                table.columns.join(",")
            ),
        ));
    }
    Ok(Points::new(table.rows.concat(), dim)?)
}

/// `x1, ..., xd`.
pub fn header(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

/// Writes a numeric table with full round-trip precision.
pub fn write_csv(path: &Path, columns: &[String], rows: impl IntoIterator<Item = Vec<f64>>) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    w.write_record(columns).map_err(|e| io_error(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(|v| format!("{v:?}")))
            .map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {what}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|e| io_error(path, e))
}
