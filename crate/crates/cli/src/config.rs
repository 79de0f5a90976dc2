//! Config-file support: a plain `key = value` file whose keys mirror the
//! long flag names. Values from the file are appended as flags unless the
//! same flag was given explicitly, so the command line always wins.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::{CliError, Result};

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config(path: &Path) -> Result<Vec<(String, String)>> {
    let content = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (no, raw) in content.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{} line {}: expected `key = value`, got {raw:?}",
                path.display(),
                no + 1
            ))
        })?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(pairs)
}

/// Merge a `--config FILE` into the argument list: file entries become
/// `--key value` flags appended after the explicit ones, skipping keys
/// already present. Boolean keys use `true`/`false` values and expand to
/// the bare flag (or nothing).
pub fn merge_config_args(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut config_path = None;
    for (i, arg) in args.iter().enumerate() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            let value = args
                .get(i + 1)
                .ok_or_else(|| CliError::Usage("--config needs a file path".into()))?;
            config_path = Some(std::path::PathBuf::from(value));
        } else if let Some(rest) = text.strip_prefix("--config=") {
            config_path = Some(std::path::PathBuf::from(rest));
        }
    }
    let Some(path) = config_path else {
        return Ok(args);
    };
    let explicit: Vec<String> = args
        .iter()
        .filter_map(|a| {
            let text = a.to_string_lossy();
            text.strip_prefix("--")
                .map(|flag| flag.split('=').next().unwrap_or("").to_string())
        })
        .collect();
    let mut merged = args.clone();
    for (key, value) in parse_config(&path)? {
        if key == "config" || explicit.contains(&key) {
            continue;
        }
        match value.as_str() {
            "true" => merged.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                merged.push(format!("--{key}").into());
                merged.push(value.into());
            }
        }
    }
    Ok(merged)
}
