//! CSV emission with 12 significant digits.

use std::io::Write;
use std::path::Path;

use persuasion::model::format_float;

use crate::error::CliError;

pub const CSV_DIGITS: usize = 12;

pub fn float(x: f64) -> String {
    format_float(x, CSV_DIGITS)
}

pub fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// Writes a header and rows to `path`, or to `out` when `path` is `None`.
pub fn write_csv(path: Option<&Path>, header: &[&str], rows: &[Vec<String>], out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| CliError::io(p, e))?;
            write_rows(csv::Writer::from_writer(file), header, rows)
        }
        None => write_rows(csv::Writer::from_writer(out), header, rows),
    }
}

fn write_rows<W: Write>(mut w: csv::Writer<W>, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

pub fn write_text(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn join_floats(xs: &[f64]) -> String {
    xs.iter().map(|&x| float(x)).collect::<Vec<_>>().join(",")
}
