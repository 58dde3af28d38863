//! CSV dataset files.
//!
//! Schema: a required header `f0,...,f{d-1}` with an optional final `label`
//! column holding integer class identifiers; one data row per point, UTF-8,
//! `.` as the decimal separator. Features are written with 17 significant
//! digits so a save/load round trip reproduces every f64 bit for bit.

use std::path::Path;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

fn csv_format_err(path: &Path, line: u64, msg: impl Into<String>) -> Error {
    Error::CsvFormat {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Writes a dataset in the CSV schema.
pub fn save_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| wrap_csv_error(path, e))?;
    let d = dataset.dim();
    let mut header: Vec<String> = (0..d).map(|i| format!("f{i}")).collect();
    if dataset.labels().is_some() {
        header.push("label".to_string());
    }
    writer
        .write_record(&header)
        .map_err(|e| wrap_csv_error(path, e))?;
    for i in 0..dataset.n() {
        let mut record: Vec<String> = dataset.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        if let Some(labels) = dataset.labels() {
            record.push(labels[i].to_string());
        }
        writer
            .write_record(&record)
            .map_err(|e| wrap_csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn wrap_csv_error(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => {
            if let csv::ErrorKind::Io(io) = e.into_kind() {
                Error::io(path, io)
            } else {
                unreachable!()
            }
        }
        _ => csv_format_err(path, e.position().map_or(0, |p| p.line()), e.to_string()),
    }
}

/// Loads a dataset from the CSV schema, preserving row order.
///
/// Malformed rows are reported with their 1-based line number; labels must
/// parse as integers.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| wrap_csv_error(path, e))?;

    let headers = reader
        .headers()
        .map_err(|e| wrap_csv_error(path, e))?
        .clone();
    let mut fields: Vec<&str> = headers.iter().collect();
    let has_labels = fields.last() == Some(&"label");
    if has_labels {
        fields.pop();
    }
    let d = fields.len();
    if d == 0 {
        return Err(csv_format_err(path, 1, "no feature columns in header"));
    }
    for (i, name) in fields.iter().enumerate() {
        let expected = format!("f{i}");
        if *name != expected {
            return Err(csv_format_err(
                path,
                1,
                format!("expected column '{expected}', found '{name}'"),
            ));
        }
    }

    let mut features = Vec::new();
    let mut labels = if has_labels { Some(Vec::new()) } else { None };
    for record in reader.records() {
        let record = record.map_err(|e| wrap_csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        for (col, raw) in record.iter().take(d).enumerate() {
            let value: f64 = raw.trim().parse().map_err(|_| {
                csv_format_err(
                    path,
                    line,
                    format!("column f{col}: '{raw}' is not a number"),
                )
            })?;
            if !value.is_finite() {
                return Err(csv_format_err(
                    path,
                    line,
                    format!("column f{col}: non-finite value"),
                ));
            }
            features.push(value);
        }
        if let Some(ref mut labels) = labels {
            let raw = record.get(d).expect("flexible(false) fixed the width");
            let label: u32 = raw.trim().parse().map_err(|_| {
                csv_format_err(
                    path,
                    line,
                    format!("label '{raw}' is not a non-negative integer"),
                )
            })?;
            labels.push(label);
        }
    }
    if features.is_empty() {
        return Err(Error::invalid(format!(
            "{}: no data rows (header only)",
            path.display()
        )));
    }
    Dataset::new(features, d, labels)
}
