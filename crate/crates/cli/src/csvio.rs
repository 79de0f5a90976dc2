//! CSV ingestion and serialization of datasets.
//!
//! UTF-8, first line header, decimal-point reals. Samples are rows; the
//! loader transposes into the internal feature-per-row layout. Label
//! values may be given as {-1, +1} or as {0, 1}, which are remapped to
//! {-1, +1} per column; mixing the two domains in one column is an error.

use std::path::Path;

use fmsel_core::{Dataset, TaskKind};
use nalgebra::DMatrix;

use crate::{CliError, Result};

/// Which columns hold labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumns {
    /// The last `n` columns.
    LastN(usize),
    /// Columns matched by header name.
    Names(Vec<String>),
}

/// Column layout and task declaration of a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvSchema {
    pub labels: LabelColumns,
    /// Task kind; inferred from the label matrix when absent.
    pub task: Option<TaskKind>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            labels: LabelColumns::LastN(1),
            task: None,
        }
    }
}

fn infer_task(labels: &DMatrix<i8>) -> TaskKind {
    if labels.ncols() == 1 {
        return TaskKind::Binary;
    }
    let one_hot = (0..labels.nrows())
        .all(|s| (0..labels.ncols()).filter(|&k| labels[(s, k)] == 1).count() == 1);
    if one_hot {
        TaskKind::MultiClass
    } else {
        TaskKind::MultiLabel
    }
}

/// Load a dataset from a CSV file according to the schema.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let total_cols = headers.len();

    let label_idx: Vec<usize> = match &schema.labels {
        LabelColumns::LastN(n) => {
            if *n == 0 || *n >= total_cols {
                return Err(CliError::Usage(format!(
                    "the file has {total_cols} columns; cannot take the last {n} as labels"
                )));
            }
            (total_cols - n..total_cols).collect()
        }
        LabelColumns::Names(names) => names
            .iter()
            .map(|name| {
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| CliError::Usage(format!("no column named {name:?}")))
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let feature_idx: Vec<usize> = (0..total_cols).filter(|i| !label_idx.contains(i)).collect();
    if feature_idx.is_empty() {
        return Err(CliError::Usage("no feature columns left".into()));
    }

    let mut feature_rows: Vec<Vec<f64>> = Vec::new();
    let mut label_rows: Vec<Vec<f64>> = Vec::new();
    for (record_no, record) in reader.records().enumerate() {
        let line = record_no + 2; // header is line 1
        let record = record.map_err(|e| {
            CliError::Data(format!("{} line {line}: {e}", path.display()))
        })?;
        let parse = |col: usize| -> Result<f64> {
            let raw = record.get(col).ok_or_else(|| {
                CliError::Data(format!("{} line {line}: missing field {}", path.display(), col + 1))
            })?;
            raw.trim().parse::<f64>().map_err(|_| {
                CliError::Data(format!(
                    "{} line {line}, column {:?}: cannot parse {raw:?} as a number",
                    path.display(),
                    headers[col]
                ))
            })
        };
        let mut features = Vec::with_capacity(feature_idx.len());
        for &col in &feature_idx {
            let v = parse(col)?;
            if !v.is_finite() {
                return Err(CliError::Data(format!(
                    "{} line {line}, column {:?}: non-finite feature value",
                    path.display(),
                    headers[col]
                )));
            }
            features.push(v);
        }
        let mut labels = Vec::with_capacity(label_idx.len());
        for &col in &label_idx {
            let v = parse(col)?;
            if v != 1.0 && v != -1.0 && v != 0.0 {
                return Err(CliError::Data(format!(
                    "{} line {line}, column {:?}: label {v} outside {{-1, +1, 0, 1}}",
                    path.display(),
                    headers[col]
                )));
            }
            labels.push(v);
        }
        feature_rows.push(features);
        label_rows.push(labels);
    }
    let n = feature_rows.len();
    if n < 2 {
        return Err(CliError::Data(format!(
            "{}: need at least 2 samples, found {n}",
            path.display()
        )));
    }

    // per-column label domain: {0,1} columns are remapped to {-1,+1}
    let m = label_idx.len();
    let mut labels = DMatrix::zeros(n, m);
    for k in 0..m {
        let has_zero = label_rows.iter().any(|row| row[k] == 0.0);
        let has_minus = label_rows.iter().any(|row| row[k] == -1.0);
        if has_zero && has_minus {
            return Err(CliError::Data(format!(
                "{}: label column {:?} mixes the {{0,1}} and {{-1,+1}} domains",
                path.display(),
                headers[label_idx[k]]
            )));
        }
        for (s, row) in label_rows.iter().enumerate() {
            labels[(s, k)] = if row[k] > 0.0 { 1i8 } else { -1 };
        }
    }

    let features =
        DMatrix::from_fn(feature_idx.len(), n, |i, j| feature_rows[j][i]);
    let names: Vec<String> = feature_idx.iter().map(|&i| headers[i].clone()).collect();
    let task = schema.task.unwrap_or_else(|| infer_task(&labels));
    Ok(Dataset::new(features, labels, task, names)?)
}

/// Write a dataset as CSV (feature columns first, then `label`/`label<k>`).
///
/// Bias-augmented datasets are rejected: the bias row is model plumbing,
/// not data, and would be re-ingested as a feature.
pub fn save_csv(path: &Path, ds: &Dataset) -> Result<()> {
    if ds.has_bias_row() {
        return Err(CliError::Usage(
            "refusing to serialize a bias-augmented dataset".into(),
        ));
    }
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut header: Vec<String> = ds.feature_names().to_vec();
    if ds.n_classes() == 1 {
        header.push("label".to_string());
    } else {
        header.extend((1..=ds.n_classes()).map(|k| format!("label{k}")));
    }
    writer
        .write_record(&header)
        .map_err(|e| CliError::Data(e.to_string()))?;
    for s in 0..ds.n_samples() {
        let mut record: Vec<String> = (0..ds.dim())
            .map(|i| format!("{}", ds.features()[(i, s)]))
            .collect();
        record.extend((0..ds.n_classes()).map(|k| format!("{}", ds.labels()[(s, k)])));
        writer
            .write_record(&record)
            .map_err(|e| CliError::Data(e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}
