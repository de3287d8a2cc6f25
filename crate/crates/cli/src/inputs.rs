//! Input files, each read once and fingerprinted for the report header.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};
use ssopt_core::ahp::judgments::parse_hierarchy;
use ssopt_core::taguchi::{FactorLevels, L9Design, ResponseMatrix, FACTOR_NAMES};
use ssopt_core::{Hierarchy, ProblemInstance};

pub struct Input {
    pub path: PathBuf,
    pub text: String,
    pub sha256: String,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        let sha256 = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        let text = String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8 text", path.display()))?;
        Ok(Self { path: path.to_path_buf(), text, sha256 })
    }

    /// `name=file.json@sha256:0123abcd...` with a 16-digit prefix of the hash.
    pub fn provenance(&self, name: &str) -> String {
        let file = self.path.file_name().map_or_else(|| self.path.display().to_string(), |f| f.to_string_lossy().into());
        format!("{name}={file}@sha256:{}", &self.sha256[..16])
    }
}

pub fn problem(path: &Path) -> Result<(Input, ProblemInstance)> {
    let input = Input::read(path)?;
    let inst = ProblemInstance::from_json(&input.text).with_context(|| format!("problem file {}", path.display()))?;
    Ok((input, inst))
}

pub fn judgments(path: &Path) -> Result<(Input, Hierarchy)> {
    let input = Input::read(path)?;
    let h = parse_hierarchy(&input.text).with_context(|| format!("judgments file {}", path.display()))?;
    Ok((input, h))
}

pub fn levels(path: &Path) -> Result<(Input, FactorLevels)> {
    let input = Input::read(path)?;
    let levels = FactorLevels::from_json(&input.text).with_context(|| format!("levels file {}", path.display()))?;
    Ok((input, levels))
}

/// Reads a response table with columns `experiment,t_init,alpha,markov_len`
/// followed by one or more columns whose names start with `response`. Each
/// row's factor settings must match the design row it names.
pub fn responses(path: &Path, design: &L9Design) -> Result<(Input, ResponseMatrix)> {
    let input = Input::read(path)?;
    let ctx = || format!("responses file {}", path.display());
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input.text.as_bytes());
    let headers = reader.headers().with_context(ctx)?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let experiment = column("experiment").with_context(|| format!("{}: missing 'experiment' column", ctx()))?;
    let factors: Vec<Option<usize>> = FACTOR_NAMES.iter().map(|f| column(f)).collect();
    let response_cols: Vec<usize> =
        headers.iter().enumerate().filter(|(_, h)| h.starts_with("response")).map(|(i, _)| i).collect();
    if response_cols.is_empty() {
        bail!("{}: no 'response' column", ctx());
    }

    let mut rows: Vec<Option<Vec<f64>>> = vec![None; 9];
    for (line, record) in reader.records().enumerate() {
        let record = record.with_context(ctx)?;
        let at = |c: usize| record.get(c).unwrap_or("");
        let number = |c: usize| -> Result<f64> {
            at(c).parse::<f64>().with_context(|| {
                format!("{}, data row {}: '{}' in column '{}' is not a number", ctx(), line + 1, at(c), &headers[c])
            })
        };
        let exp: usize = at(experiment)
            .parse()
            .ok()
            .filter(|e| (1..=9).contains(e))
            .with_context(|| format!("{}, data row {}: experiment must be 1..9, got '{}'", ctx(), line + 1, at(experiment)))?;
        let (t, a, m) = design.setting(exp - 1);
        for (f, (col, want)) in factors.iter().zip([t, a, m as f64]).enumerate() {
            if let Some(c) = *col {
                let got = number(c)?;
                if (got - want).abs() > 1e-9 * want.abs().max(1.0) {
                    bail!(
                        "{}: experiment {exp} has {} = {got}, but the design uses {want}",
                        ctx(),
                        FACTOR_NAMES[f]
                    );
                }
            }
        }
        let values = response_cols.iter().map(|&c| number(c)).collect::<Result<Vec<_>>>()?;
        if rows[exp - 1].replace(values).is_some() {
            bail!("{}: experiment {exp} appears twice", ctx());
        }
    }
    let matrix = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.with_context(|| format!("{}: experiment {} is missing", ctx(), i + 1)))
        .collect::<Result<Vec<_>>>()?;
    Ok((input, matrix))
}
