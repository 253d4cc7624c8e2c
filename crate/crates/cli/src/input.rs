//! Parsing of the command-line inputs: field descriptors, point lists and
//! the JSON run configuration.

use std::fmt;
use std::path::Path;

use anyhow::Result;
use fracvar::fields::{ScalarField, VectorField};
use fracvar::suites::SuiteConfig;

/// Bad input from the command line; exits with status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

/// Inline text, or the contents of a file when the value starts with `@`.
pub fn inline_or_file(value: &str) -> Result<String> {
    match value.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {path}: {e}")).into()),
        None => Ok(value.to_string()),
    }
}

pub fn scalar_field(value: &str) -> Result<ScalarField> {
    let text = inline_or_file(value)?;
    ScalarField::from_json(&text).map_err(|e| Usage(e.to_string()).into())
}

/// `{"components": [...]}`, or a one-dimensional scalar descriptor.
pub fn vector_field(value: &str) -> Result<VectorField> {
    let text = inline_or_file(value)?;
    if let Ok(v) = serde_json::from_str::<VectorField>(&text) {
        return Ok(v);
    }
    match ScalarField::from_json(&text) {
        Ok(f) if f.dim() == 1 => Ok(VectorField::from_scalar(f)?),
        Ok(f) => usage(format!(
            "a {}-dimensional divergence needs {{\"components\": [...]}}",
            f.dim()
        )),
        Err(e) => usage(format!("not a vector field or 1-D scalar field: {e}")),
    }
}

/// Comma-separated reals.
pub fn reals(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().map_err(|_| Usage(format!("`{t}` is not a number")).into())
        })
        .collect()
}

/// Points as CSV: one point per line (or `;`-separated), coordinates
/// separated by commas. A non-numeric first line is taken as a header. In
/// one dimension a single line may list several points.
pub fn points(value: &str, dim: usize) -> Result<Vec<Vec<f64>>> {
    let text = inline_or_file(value)?;
    let mut out = Vec::new();
    let rows = text
        .split(['\n', ';'])
        .map(str::trim)
        .filter(|r| !r.is_empty() && !r.starts_with('#'));
    for (i, row) in rows.enumerate() {
        let coords = match reals(row) {
            Ok(c) => c,
            Err(_) if i == 0 && row.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') => continue,
            Err(e) => return Err(e),
        };
        if dim == 1 {
            out.extend(coords.into_iter().map(|c| vec![c]));
        } else if coords.len() == dim {
            out.push(coords);
        } else {
            return usage(format!("point `{row}` has {} coordinates, expected {dim}", coords.len()));
        }
    }
    if out.is_empty() {
        return usage("no points given");
    }
    Ok(out)
}

pub fn config(path: Option<&Path>) -> Result<SuiteConfig> {
    let Some(path) = path else {
        return Ok(SuiteConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {}: {e}", path.display())))?;
    SuiteConfig::from_json(&text).map_err(|e| Usage(e.to_string()).into())
}

/// `FRACVAR_THREADS`, if set, must be a positive integer.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("FRACVAR_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => usage(format!("FRACVAR_THREADS must be a positive integer, got `{v}`")),
        },
    }
}
