//! JSON judgment files.
//!
//! ```json
//! {
//!   "criteria": ["Cost", "Quality"],
//!   "criteria_matrix": [[1, "1/3"], [3, 1]],
//!   "alternatives": ["S1", "S2"],
//!   "alternative_matrices": { "Cost": [[1, 2], [null, 1]], "Quality": [[1, "1/2"]] }
//! }
//! ```
//!
//! Entries are numbers or fraction strings. Below-diagonal entries may be
//! `null`, or a row may list only its entries from the diagonal rightwards;
//! missing cells are filled with the reciprocal of their mirror.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use super::{AhpError, Hierarchy, PairwiseMatrix};

#[derive(Debug, Error)]
pub enum JudgmentsError {
    #[error("malformed judgments file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix '{matrix}', cell ({row}, {col}): cannot parse '{text}' as a positive number or fraction")]
    BadEntry { matrix: String, row: usize, col: usize, text: String },
    #[error("matrix '{matrix}', cell ({row}, {col}): missing entry and its mirror is missing too")]
    MissingEntry { matrix: String, row: usize, col: usize },
    #[error("matrix '{matrix}', row {row}: expected {n} entries (or {upper} from the diagonal), got {len}")]
    BadRow { matrix: String, row: usize, n: usize, upper: usize, len: usize },
    #[error("matrix '{matrix}' has {rows} rows, expected {n}")]
    BadRowCount { matrix: String, rows: usize, n: usize },
    #[error("no alternative matrix for criterion '{0}'")]
    MissingCriterion(String),
    #[error("alternative matrix given for unknown criterion '{0}'")]
    UnknownCriterion(String),
    #[error("matrix '{matrix}': {source}")]
    Invalid {
        matrix: String,
        #[source]
        source: AhpError,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Entry {
    Number(f64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JudgmentsFile {
    criteria: Vec<String>,
    criteria_matrix: Vec<Vec<Option<Entry>>>,
    alternatives: Vec<String>,
    alternative_matrices: BTreeMap<String, Vec<Vec<Option<Entry>>>>,
}

/// Parses `"3"`, `"0.5"`, `"1/9"` and `" 2 / 7 "`.
pub fn parse_ratio(text: &str) -> Option<f64> {
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().ok()?;
            let den: f64 = den.trim().parse().ok()?;
            num / den
        }
        None => text.trim().parse().ok()?,
    };
    (value.is_finite() && value > 0.0).then_some(value)
}

fn fill_matrix(name: &str, rows: &[Vec<Option<Entry>>], n: usize) -> Result<Vec<Vec<f64>>, JudgmentsError> {
    if rows.len() != n {
        return Err(JudgmentsError::BadRowCount { matrix: name.to_string(), rows: rows.len(), n });
    }
    let mut cells: Vec<Vec<Option<f64>>> = vec![vec![None; n]; n];
    for (row, r) in rows.iter().enumerate() {
        let offset = if r.len() == n {
            0
        } else if r.len() == n - row {
            row
        } else {
            return Err(JudgmentsError::BadRow {
                matrix: name.to_string(),
                row,
                n,
                upper: n - row,
                len: r.len(),
            });
        };
        for (i, entry) in r.iter().enumerate() {
            let col = offset + i;
            cells[row][col] = match entry {
                None => None,
                Some(Entry::Number(v)) => Some(*v),
                Some(Entry::Text(t)) => Some(parse_ratio(t).ok_or_else(|| JudgmentsError::BadEntry {
                    matrix: name.to_string(),
                    row,
                    col,
                    text: t.clone(),
                })?),
            };
        }
    }
    let mut out = vec![vec![0.0; n]; n];
    for row in 0..n {
        for col in 0..n {
            out[row][col] = match (cells[row][col], cells[col][row]) {
                (Some(v), _) => v,
                (None, Some(mirror)) => 1.0 / mirror,
                (None, None) if row == col => 1.0,
                (None, None) => {
                    return Err(JudgmentsError::MissingEntry { matrix: name.to_string(), row, col })
                }
            };
        }
    }
    Ok(out)
}

fn validated(name: &str, raw: &[Vec<f64>], labels: &[String]) -> Result<PairwiseMatrix, JudgmentsError> {
    PairwiseMatrix::validate(raw, labels).map_err(|source| JudgmentsError::Invalid {
        matrix: name.to_string(),
        source,
    })
}

/// Parses and validates a judgments document into a hierarchy.
pub fn parse_hierarchy(json: &str) -> Result<Hierarchy, JudgmentsError> {
    let file: JudgmentsFile = serde_json::from_str(json)?;
    let crit_name = "criteria";
    let raw = fill_matrix(crit_name, &file.criteria_matrix, file.criteria.len())?;
    let criteria = validated(crit_name, &raw, &file.criteria)?;

    if let Some(unknown) = file.alternative_matrices.keys().find(|k| !file.criteria.contains(k)) {
        return Err(JudgmentsError::UnknownCriterion(unknown.clone()));
    }
    let n_alt = file.alternatives.len();
    let mut alternatives = Vec::with_capacity(file.criteria.len());
    for c in &file.criteria {
        let rows = file
            .alternative_matrices
            .get(c)
            .ok_or_else(|| JudgmentsError::MissingCriterion(c.clone()))?;
        let raw = fill_matrix(c, rows, n_alt)?;
        alternatives.push(validated(c, &raw, &file.alternatives)?);
    }
    Hierarchy::new(criteria, alternatives).map_err(|source| JudgmentsError::Invalid {
        matrix: "hierarchy".to_string(),
        source,
    })
}
