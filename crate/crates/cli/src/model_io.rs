//! Plain-text model file: a metadata block in `# key value` comment
//! lines, a `d m` header, then d rows of m decimals.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::{CliError, Result};

/// Provenance of a serialized projection matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelMeta {
    pub lambda: f64,
    pub r: f64,
    pub beta: f64,
    pub zeta: f64,
    pub seed: u64,
    pub iterations: usize,
    pub objective: f64,
}

pub fn write_model(path: &Path, projection: &DMatrix<f64>, meta: &ModelMeta) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# lambda {}\n", meta.lambda));
    out.push_str(&format!("# r {}\n", meta.r));
    out.push_str(&format!("# beta {}\n", meta.beta));
    out.push_str(&format!("# zeta {}\n", meta.zeta));
    out.push_str(&format!("# seed {}\n", meta.seed));
    out.push_str(&format!("# iterations {}\n", meta.iterations));
    out.push_str(&format!("# objective {}\n", meta.objective));
    out.push_str(&format!("{} {}\n", projection.nrows(), projection.ncols()));
    for i in 0..projection.nrows() {
        let row: Vec<String> = (0..projection.ncols())
            .map(|k| format!("{}", projection[(i, k)]))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_model(path: &Path) -> Result<(DMatrix<f64>, ModelMeta)> {
    let content = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let bad = |what: &str| CliError::Data(format!("{}: {what}", path.display()));

    let mut meta = ModelMeta {
        lambda: f64::NAN,
        r: f64::NAN,
        beta: f64::NAN,
        zeta: f64::NAN,
        seed: 0,
        iterations: 0,
        objective: f64::NAN,
    };
    let mut lines = content.lines().peekable();
    while let Some(line) = lines.peek() {
        let Some(rest) = line.strip_prefix('#') else {
            break;
        };
        let mut parts = rest.split_whitespace();
        let key = parts.next().unwrap_or("");
        let value = parts.next().unwrap_or("");
        match key {
            "lambda" => meta.lambda = value.parse().map_err(|_| bad("bad lambda"))?,
            "r" => meta.r = value.parse().map_err(|_| bad("bad r"))?,
            "beta" => meta.beta = value.parse().map_err(|_| bad("bad beta"))?,
            "zeta" => meta.zeta = value.parse().map_err(|_| bad("bad zeta"))?,
            "seed" => meta.seed = value.parse().map_err(|_| bad("bad seed"))?,
            "iterations" => meta.iterations = value.parse().map_err(|_| bad("bad iterations"))?,
            "objective" => meta.objective = value.parse().map_err(|_| bad("bad objective"))?,
            _ => {}
        }
        lines.next();
    }
    let header = lines.next().ok_or_else(|| bad("missing size header"))?;
    let mut parts = header.split_whitespace();
    let d: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad("bad size header"))?;
    let m: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad("bad size header"))?;
    let mut projection = DMatrix::zeros(d, m);
    for i in 0..d {
        let line = lines
            .next()
            .ok_or_else(|| bad(&format!("missing matrix row {i}")))?;
        let values = line
            .split_whitespace()
            .map(|tok| tok.parse::<f64>().map_err(|_| bad("bad matrix entry")))
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != m {
            return Err(bad(&format!(
                "row {i} has {} entries, expected {m}",
                values.len()
            )));
        }
        for k in 0..m {
            projection[(i, k)] = values[k];
        }
    }
    if !meta.lambda.is_finite() {
        return Err(bad("missing lambda metadata"));
    }
    Ok((projection, meta))
}
