use std::fs;
use std::io::{self, Write};
use std::path::Path;

use costdca::Curve;

use crate::CliError;

/// One row of the `x,y,series` export.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub x: f64,
    pub y: f64,
    pub series: String,
}

pub fn curve_rows(curve: &Curve, series: &str) -> Vec<CurveRow> {
    curve
        .points()
        .map(|(x, y)| CurveRow {
            x,
            y,
            series: series.to_string(),
        })
        .collect()
}

pub fn rows_to_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("x,y,series\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.x, r.y, r.series));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

/// Writes to `path` when given, stdout otherwise.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, contents),
        None => io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::Data(format!("cannot write to stdout: {e}"))),
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
