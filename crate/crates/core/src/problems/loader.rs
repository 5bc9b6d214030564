//! Loader for plain-text sparse classification data.
//!
//! One observation per line: `label index:value index:value ...` with 1-based
//! feature indices. Labels are mapped to `{-1, 1}` by sign (nonpositive labels
//! become `-1`); features are densified.

use std::fs;
use std::path::Path;

use crate::error::{CoreError, Result};

/// Dense features and signed labels parsed from the sparse text format.
pub struct SparseDataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
}

/// Parses the sparse format from a string.
pub fn parse_sparse_classification(text: &str, n_features: Option<usize>) -> Result<SparseDataset> {
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut labels = Vec::new();
    let mut max_index = 0usize;

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let label_tok = parts.next().expect("nonempty line has a first token");
        let raw: f64 = label_tok.parse().map_err(|_| {
            CoreError::domain(format!("line {}: bad label '{label_tok}'", lineno + 1))
        })?;
        labels.push(if raw > 0.0 { 1.0 } else { -1.0 });

        let mut entries = Vec::new();
        for tok in parts {
            let (idx, val) = tok.split_once(':').ok_or_else(|| {
                CoreError::domain(format!("line {}: bad entry '{tok}'", lineno + 1))
            })?;
            let idx: usize = idx.parse().map_err(|_| {
                CoreError::domain(format!("line {}: bad index '{idx}'", lineno + 1))
            })?;
            if idx == 0 {
                return Err(CoreError::domain(format!(
                    "line {}: indices are 1-based",
                    lineno + 1
                )));
            }
            let val: f64 = val.parse().map_err(|_| {
                CoreError::domain(format!("line {}: bad value '{val}'", lineno + 1))
            })?;
            max_index = max_index.max(idx);
            entries.push((idx - 1, val));
        }
        rows.push(entries);
    }

    if rows.is_empty() {
        return Err(CoreError::domain("dataset has no observations"));
    }
    let n = match n_features {
        Some(n) if n >= max_index => n,
        Some(n) => {
            return Err(CoreError::domain(format!(
                "declared {n} features but data uses index {max_index}"
            )))
        }
        None => max_index,
    };

    let features = rows
        .into_iter()
        .map(|entries| {
            let mut dense = vec![0.0; n];
            for (i, v) in entries {
                dense[i] = v;
            }
            dense
        })
        .collect();
    Ok(SparseDataset { features, labels })
}

/// Reads and parses a sparse classification file.
pub fn load_sparse_classification(
    path: impl AsRef<Path>,
    n_features: Option<usize>,
) -> Result<SparseDataset> {
    let text = fs::read_to_string(path.as_ref())
        .map_err(|e| CoreError::domain(format!("cannot read {}: {e}", path.as_ref().display())))?;
    parse_sparse_classification(&text, n_features)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_labels_and_densifies() {
        let text = "+1 1:0.5 3:-2.0\n-1 2:1.5\n2 1:1.0\n";
        let ds = parse_sparse_classification(text, None).unwrap();
        assert_eq!(ds.labels, vec![1.0, -1.0, 1.0]);
        assert_eq!(ds.features[0], vec![0.5, 0.0, -2.0]);
        assert_eq!(ds.features[1], vec![0.0, 1.5, 0.0]);
        assert_eq!(ds.features[2], vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_label_maps_to_negative() {
        let ds = parse_sparse_classification("0 1:1.0\n", None).unwrap();
        assert_eq!(ds.labels, vec![-1.0]);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_sparse_classification("abc 1:1.0\n", None).is_err());
        assert!(parse_sparse_classification("1 0:1.0\n", None).is_err());
        assert!(parse_sparse_classification("1 1-1.0\n", None).is_err());
        assert!(parse_sparse_classification("", None).is_err());
        assert!(parse_sparse_classification("1 5:1.0\n", Some(3)).is_err());
    }
}
