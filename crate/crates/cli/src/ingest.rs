//! CSV to [`Dataset`] conversion.

use std::path::PathBuf;

use logitkit::model::INTERCEPT;
use logitkit::{Dataset64, Matrix64};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsvSpec {
    pub path: PathBuf,
    pub label_column: String,
    /// `None` selects every non-label column whose cells are all numeric.
    pub feature_columns: Option<Vec<String>>,
    pub delimiter: u8,
    pub has_header: bool,
}

impl CsvSpec {
    pub fn new(path: impl Into<PathBuf>, label_column: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            label_column: label_column.into(),
            feature_columns: None,
            delimiter: b',',
            has_header: true,
        }
    }

    pub fn with_features<S: Into<String>>(mut self, features: impl IntoIterator<Item = S>) -> Self {
        self.feature_columns = Some(features.into_iter().map(Into::into).collect());
        self
    }
}

struct Table {
    headers: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    fn column(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Data(format!("column {name:?} not found in input")))
    }
}

fn read_table(spec: &CsvSpec) -> Result<Table> {
    let file = std::fs::File::open(&spec.path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", spec.path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(spec.has_header)
        .from_reader(file);
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        rows.push(rec.map_err(|e| CliError::Data(format!("row {}: {e}", i + 1)))?);
    }
    let headers = if spec.has_header {
        reader
            .headers()
            .map_err(|e| CliError::Data(format!("header: {e}")))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect()
    } else {
        // positional names "1", "2", ...
        (1..=rows.first().map_or(0, |r| r.len())).map(|j| j.to_string()).collect()
    };
    if rows.is_empty() {
        return Err(CliError::Data(format!("{} has no data rows", spec.path.display())));
    }
    Ok(Table { headers, rows })
}

fn parse_cell(raw: &str) -> Option<f64> {
    raw.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_column(table: &Table, col: usize) -> Result<Vec<f64>> {
    table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let raw = r.get(col).unwrap_or("");
            parse_cell(raw).ok_or_else(|| {
                CliError::Data(format!(
                    "row {}, column {:?}: cannot parse {raw:?} as a finite number",
                    i + 1,
                    table.headers[col]
                ))
            })
        })
        .collect()
}

fn feature_indices(table: &Table, spec: &CsvSpec, label: Option<usize>) -> Result<Vec<usize>> {
    match &spec.feature_columns {
        Some(names) => {
            let mut idx = Vec::with_capacity(names.len());
            for name in names {
                if *name == spec.label_column {
                    return Err(CliError::Usage(format!(
                        "label column {name:?} cannot also be a feature"
                    )));
                }
                let j = table.column(name)?;
                if idx.contains(&j) {
                    return Err(CliError::Usage(format!("feature {name:?} listed twice")));
                }
                idx.push(j);
            }
            Ok(idx)
        }
        None => Ok((0..table.headers.len())
            .filter(|&j| Some(j) != label)
            .filter(|&j| table.rows.iter().all(|r| parse_cell(r.get(j).unwrap_or("")).is_some()))
            .collect()),
    }
}

fn build_rows(table: &Table, cols: &[usize]) -> Result<Vec<Vec<f64>>> {
    let columns = cols
        .iter()
        .map(|&j| parse_column(table, j))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..table.rows.len())
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect())
}

fn names_with_intercept(table: &Table, cols: &[usize]) -> Vec<String> {
    std::iter::once(INTERCEPT.to_string())
        .chain(cols.iter().map(|&j| table.headers[j].clone()))
        .collect()
}

/// Reads a labelled CSV into a dataset with the intercept column prepended.
pub fn ingest(spec: &CsvSpec) -> Result<Dataset64> {
    let table = read_table(spec)?;
    let label_idx = table.column(&spec.label_column)?;
    let cols = feature_indices(&table, spec, Some(label_idx))?;
    let labels = table
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let raw = r.get(label_idx).unwrap_or("");
            match parse_cell(raw) {
                Some(v) if v == 0.0 || v == 1.0 => Ok(v),
                _ => Err(CliError::Data(format!(
                    "row {}, column {:?}: label {raw:?} is not 0 or 1",
                    i + 1,
                    spec.label_column
                ))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = build_rows(&table, &cols)?;
    Ok(Dataset64::from_features(&rows, labels)?.with_feature_names(names_with_intercept(&table, &cols))?)
}

/// Reads only the named feature columns (the label column may be absent)
/// and returns the design with its intercept column.
pub fn ingest_design(spec: &CsvSpec) -> Result<Matrix64> {
    let table = read_table(spec)?;
    let label_idx = table.column(&spec.label_column).ok();
    let cols = feature_indices(&table, spec, label_idx)?;
    let rows: Vec<Vec<f64>> = build_rows(&table, &cols)?
        .into_iter()
        .map(|r| std::iter::once(1.0).chain(r).collect())
        .collect();
    Ok(Matrix64::from_rows(&rows)?)
}
