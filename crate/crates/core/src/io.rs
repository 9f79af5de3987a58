//! CSV ingestion for clustering runs.

use std::path::Path;

use crate::divergence::Dataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Which CSV columns feed the dataset.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ColumnSpec {
    /// Feature columns by zero-based index; `None` takes every column except
    /// the label column.
    pub feature_columns: Option<Vec<usize>>,
    /// Optional ground-truth column holding nonnegative integer labels.
    pub label_column: Option<usize>,
    /// Drop rows with any feature <= 0 (e.g. zero-rainfall days).
    pub positive_filter: bool,
}

/// Parsed CSV payload.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvData {
    pub dataset: Dataset,
    pub labels: Option<Vec<usize>>,
    pub dropped_rows: usize,
}

/// Loads a comma-separated file, auto-detecting a header row: the first line
/// is treated as a header when it fails numeric parsing and at least one more
/// line follows.
pub fn load_csv(path: &Path, spec: &ColumnSpec) -> Result<CsvData> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_csv_str(&raw, spec)
}

/// [`load_csv`] on in-memory text; line numbers in errors are 1-based over
/// the original text including any header.
pub fn load_csv_str(raw: &str, spec: &ColumnSpec) -> Result<CsvData> {
    let lines: Vec<&str> = raw
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.trim().is_empty())
        .collect();
    if lines.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "file contains no data".into(),
        });
    }

    let first_parses = parse_row(lines[0]).is_ok();
    let has_header = !first_parses && lines.len() > 1;
    let start = usize::from(has_header);

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(lines.len() - start);
    let mut width = None;
    for (offset, line) in lines[start..].iter().enumerate() {
        let line_no = start + offset + 1;
        let row = parse_row(line).map_err(|message| Error::Parse {
            line: line_no,
            message,
        })?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {w} columns, found {}", row.len()),
                })
            }
            _ => {}
        }
        rows.push(row);
    }
    let width = width.unwrap_or(0);

    if let Some(label) = spec.label_column {
        if label >= width {
            return Err(Error::InvalidSpec(format!(
                "label column {label} out of range for {width} columns"
            )));
        }
    }
    let feature_cols: Vec<usize> = match &spec.feature_columns {
        Some(cols) => {
            for &c in cols {
                if c >= width {
                    return Err(Error::InvalidSpec(format!(
                        "feature column {c} out of range for {width} columns"
                    )));
                }
            }
            cols.clone()
        }
        None => (0..width)
            .filter(|c| Some(*c) != spec.label_column)
            .collect(),
    };
    if feature_cols.is_empty() {
        return Err(Error::InvalidSpec("no feature columns selected".into()));
    }

    let mut values = Vec::new();
    let mut labels = spec.label_column.map(|_| Vec::new());
    let mut dropped = 0usize;
    for (offset, row) in rows.iter().enumerate() {
        let line_no = start + offset + 1;
        if spec.positive_filter && feature_cols.iter().any(|&c| row[c] <= 0.0) {
            dropped += 1;
            continue;
        }
        for &c in &feature_cols {
            values.push(row[c]);
        }
        if let (Some(list), Some(col)) = (labels.as_mut(), spec.label_column) {
            let v = row[col];
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("label {v} is not a nonnegative integer"),
                });
            }
            list.push(v as usize);
        }
    }

    let n = values.len() / feature_cols.len();
    if n == 0 {
        return Err(Error::EmptyAfterFilter);
    }
    Ok(CsvData {
        dataset: Dataset::new(Matrix::from_vec(n, feature_cols.len(), values)),
        labels,
        dropped_rows: dropped,
    })
}

fn parse_row(line: &str) -> std::result::Result<Vec<f64>, String> {
    line.split(',')
        .map(|cell| {
            let cell = cell.trim();
            cell.parse::<f64>()
                .map_err(|_| format!("cannot parse {cell:?} as a number"))
        })
        .collect()
}
