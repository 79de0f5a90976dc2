//! On-disk split manifest: one index list per line, prefixed
//! `train:` / `val:` / `test:`, with the seed in a leading comment.

use std::fs;
use std::path::Path;

use fmsel_core::Splits;

use crate::{CliError, Result};

pub fn write_manifest(path: &Path, splits: &Splits) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# seed {}\n", splits.seed()));
    for (prefix, part) in [
        ("train", splits.train()),
        ("val", splits.validation()),
        ("test", splits.test()),
    ] {
        out.push_str(prefix);
        out.push(':');
        for i in part {
            out.push(' ');
            out.push_str(&i.to_string());
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Read a manifest back, validating the indices against `n` samples.
pub fn read_manifest(path: &Path, n: usize) -> Result<Splits> {
    let content = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut seed = 0u64;
    let mut train = None;
    let mut validation = None;
    let mut test = None;
    for (no, line) in content.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# seed") {
            seed = rest.trim().parse().map_err(|_| {
                CliError::Data(format!("{} line {}: bad seed", path.display(), no + 1))
            })?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let (prefix, rest) = line.split_once(':').ok_or_else(|| {
            CliError::Data(format!(
                "{} line {}: expected `train:`, `val:` or `test:`",
                path.display(),
                no + 1
            ))
        })?;
        let indices = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| {
                    CliError::Data(format!(
                        "{} line {}: bad index {tok:?}",
                        path.display(),
                        no + 1
                    ))
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        match prefix.trim() {
            "train" => train = Some(indices),
            "val" => validation = Some(indices),
            "test" => test = Some(indices),
            other => {
                return Err(CliError::Data(format!(
                    "{} line {}: unknown split {other:?}",
                    path.display(),
                    no + 1
                )))
            }
        }
    }
    let missing = |what: &str| CliError::Data(format!("{}: missing {what} line", path.display()));
    let splits = Splits::from_parts(
        train.ok_or_else(|| missing("train:"))?,
        validation.ok_or_else(|| missing("val:"))?,
        test.ok_or_else(|| missing("test:"))?,
        seed,
        n,
    )?;
    Ok(splits)
}
