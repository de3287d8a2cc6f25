//! L9 robust-design tuning of the annealer.
//!
//! Three factors (initial temperature, cooling factor, Markov chain length)
//! at three levels each are laid out on the standard L9(3^4) array (first
//! three columns). Responses are analysed with a main-effects ANOVA and a
//! response table whose level means pick the recommended setting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;
use thiserror::Error;

use crate::anneal::{solve, RankSolution, SaError, SaParams};
use crate::procurement::{ObjectiveMode, ProblemInstance};
use crate::rng::mix64;

pub const FACTOR_NAMES: [&str; 3] = ["t_init", "alpha", "markov_len"];

/// Zero-based level indices for the nine runs, factor columns 1..3.
pub const L9_ROWS: [[usize; 3]; 9] = [
    [0, 0, 0],
    [0, 1, 1],
    [0, 2, 2],
    [1, 0, 1],
    [1, 1, 2],
    [1, 2, 0],
    [2, 0, 2],
    [2, 1, 0],
    [2, 2, 1],
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DoeError {
    #[error("invalid factor levels: {0}")]
    InvalidLevels(String),
    #[error("expected 9 responses (one per run), got {0}")]
    WrongResponseCount(usize),
    #[error("run {row} has no responses")]
    EmptyRun { row: usize },
    #[error("signal-to-noise ratio needs positive responses, got {0}")]
    NonPositiveResponse(f64),
    #[error("replicates must be at least 1")]
    NoReplicates,
    #[error(transparent)]
    Solver(#[from] SaError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorLevels {
    pub t_init: [f64; 3],
    pub alpha: [f64; 3],
    pub markov_len: [usize; 3],
}

impl Default for FactorLevels {
    fn default() -> Self {
        Self { t_init: [10.0, 20.0, 30.0], alpha: [0.75, 0.85, 0.95], markov_len: [20, 30, 40] }
    }
}

fn distinct<T: PartialEq>(v: &[T; 3]) -> bool {
    v[0] != v[1] && v[0] != v[2] && v[1] != v[2]
}

impl FactorLevels {
    pub fn validate(&self) -> Result<(), DoeError> {
        let bad = |m: &str| Err(DoeError::InvalidLevels(m.to_string()));
        if !(distinct(&self.t_init) && distinct(&self.alpha) && distinct(&self.markov_len)) {
            return bad("levels within a factor must be distinct");
        }
        if !self.t_init.iter().all(|&t| t > 0.0 && t.is_finite()) {
            return bad("t_init levels must be positive");
        }
        if !self.alpha.iter().all(|&a| a > 0.0 && a <= 1.0) {
            return bad("alpha levels must lie in (0, 1]");
        }
        if self.markov_len.contains(&0) {
            return bad("markov_len levels must be at least 1");
        }
        Ok(())
    }

    pub fn from_json(json: &str) -> Result<Self, DoeError> {
        let levels: Self = serde_json::from_str(json).map_err(|e| DoeError::InvalidLevels(e.to_string()))?;
        levels.validate()?;
        Ok(levels)
    }

    /// Printable value of `factor` at `level`.
    pub fn value_label(&self, factor: usize, level: usize) -> String {
        match factor {
            0 => self.t_init[level].to_string(),
            1 => self.alpha[level].to_string(),
            _ => self.markov_len[level].to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L9Design {
    pub levels: FactorLevels,
    pub rows: [[usize; 3]; 9],
}

impl L9Design {
    /// `(t_init, alpha, markov_len)` of run `row`.
    pub fn setting(&self, row: usize) -> (f64, f64, usize) {
        let [a, b, c] = self.rows[row];
        (self.levels.t_init[a], self.levels.alpha[b], self.levels.markov_len[c])
    }

    /// Annealing parameters for run `row`, other fields taken from `base`.
    pub fn params(&self, row: usize, base: &SaParams) -> SaParams {
        let (t_init, alpha, markov_len) = self.setting(row);
        SaParams { t_init, alpha, markov_len, ..*base }
    }
}

pub fn build_l9(levels: FactorLevels) -> Result<L9Design, DoeError> {
    levels.validate()?;
    Ok(L9Design { levels, rows: L9_ROWS })
}

/// Seed for one `(row, replicate)` run; independent of execution order.
pub fn run_seed(base_seed: u64, row: usize, replicate: usize) -> u64 {
    base_seed ^ mix64(((row as u64) << 32) | replicate as u64)
}

/// Responses, `[run][replicate]`.
pub type ResponseMatrix = Vec<Vec<f64>>;

/// Runs the annealer for every design row and replicate. The response is the
/// best objective score the run reaches.
pub fn run_experiments(
    inst: &ProblemInstance,
    s0: &RankSolution,
    design: &L9Design,
    base: &SaParams,
    mode: ObjectiveMode,
    replicates: usize,
    base_seed: u64,
) -> Result<ResponseMatrix, DoeError> {
    if replicates == 0 {
        return Err(DoeError::NoReplicates);
    }
    let jobs: Vec<(usize, usize)> = (0..9).flat_map(|r| (0..replicates).map(move |k| (r, k))).collect();
    let scores = jobs
        .par_iter()
        .map(|&(row, rep)| {
            let params = SaParams { seed: run_seed(base_seed, row, rep), ..design.params(row, base) };
            solve(inst, s0, &params, mode).map(|o| o.best.score)
        })
        .collect::<Result<Vec<f64>, SaError>>()?;
    Ok(scores.chunks(replicates).map(<[f64]>::to_vec).collect())
}

/// Larger-the-better signal-to-noise ratio, `-10 log10(mean(1/y^2))` dB.
pub fn sn_ratio_ltb(responses: &[f64]) -> Result<f64, DoeError> {
    if let Some(&y) = responses.iter().find(|&&y| !(y > 0.0)) {
        return Err(DoeError::NonPositiveResponse(y));
    }
    if responses.is_empty() {
        return Err(DoeError::EmptyRun { row: 0 });
    }
    let mean_inv_sq = responses.iter().map(|y| 1.0 / (y * y)).sum::<f64>() / responses.len() as f64;
    Ok(-10.0 * mean_inv_sq.log10())
}

/// `P(F > f)` for an F(d1, d2) variable.
pub fn f_survival(f: f64, d1: u32, d2: u32) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    let (d1, d2) = (d1 as f64, d2 as f64);
    let x = d2 / (d2 + d1 * f);
    beta_reg(d2 / 2.0, d1 / 2.0, x).clamp(0.0, 1.0)
}

/// Per-run means of a response matrix.
pub fn run_means(responses: &[Vec<f64>]) -> Result<Vec<f64>, DoeError> {
    responses
        .iter()
        .enumerate()
        .map(|(row, r)| {
            if r.is_empty() {
                Err(DoeError::EmptyRun { row })
            } else {
                Ok(r.iter().sum::<f64>() / r.len() as f64)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnovaRow {
    pub source: String,
    pub df: usize,
    pub ss: f64,
    pub ms: f64,
    /// `None` when the residual mean square is zero.
    pub f_ratio: Option<f64>,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnovaTable {
    pub factors: Vec<AnovaRow>,
    pub residual: AnovaRow,
    pub total: AnovaRow,
}

fn level_means(design: &L9Design, y: &[f64], factor: usize) -> [f64; 3] {
    let mut sums = [0.0; 3];
    let mut counts = [0usize; 3];
    for (row, &v) in design.rows.iter().zip(y) {
        sums[row[factor]] += v;
        counts[row[factor]] += 1;
    }
    [0, 1, 2].map(|l| sums[l] / counts[l] as f64)
}

fn check_nine(y: &[f64]) -> Result<(), DoeError> {
    if y.len() != 9 {
        return Err(DoeError::WrongResponseCount(y.len()));
    }
    Ok(())
}

/// Main-effects ANOVA on the nine run means, residual by subtraction.
pub fn anova(design: &L9Design, y: &[f64]) -> Result<AnovaTable, DoeError> {
    check_nine(y)?;
    let grand = y.iter().sum::<f64>() / 9.0;
    let ss_total: f64 = y.iter().map(|v| (v - grand).powi(2)).sum();
    let factor_ss: Vec<f64> = (0..3)
        .map(|f| 3.0 * level_means(design, y, f).iter().map(|m| (m - grand).powi(2)).sum::<f64>())
        .collect();
    let ss_residual = (ss_total - factor_ss.iter().sum::<f64>()).max(0.0);
    let ms_residual = ss_residual / 2.0;
    let residual_zero = ss_residual <= 1e-12 * ss_total || ss_total == 0.0;

    let factors = factor_ss
        .iter()
        .zip(FACTOR_NAMES)
        .map(|(&ss, name)| {
            let ms = ss / 2.0;
            let f_ratio = (!residual_zero).then(|| ms / ms_residual);
            AnovaRow {
                source: name.to_string(),
                df: 2,
                ss,
                ms,
                f_ratio,
                p_value: f_ratio.map(|f| f_survival(f, 2, 2)),
            }
        })
        .collect();
    let plain = |source: &str, df: usize, ss: f64| AnovaRow {
        source: source.to_string(),
        df,
        ss,
        ms: ss / df as f64,
        f_ratio: None,
        p_value: None,
    };
    Ok(AnovaTable { factors, residual: plain("residual", 2, ss_residual), total: plain("total", 8, ss_total) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorResponse {
    pub factor: String,
    pub level_means: [f64; 3],
    pub delta: f64,
    /// 1 = largest delta.
    pub rank: usize,
    /// Zero-based level with the highest mean.
    pub best_level: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResponseTable {
    pub factors: Vec<FactorResponse>,
}

impl ResponseTable {
    /// Recommended `(t_init, alpha, markov_len)`.
    pub fn recommended(&self, levels: &FactorLevels) -> (f64, f64, usize) {
        (
            levels.t_init[self.factors[0].best_level],
            levels.alpha[self.factors[1].best_level],
            levels.markov_len[self.factors[2].best_level],
        )
    }
}

pub fn response_table(design: &L9Design, y: &[f64]) -> Result<ResponseTable, DoeError> {
    check_nine(y)?;
    let mut factors: Vec<FactorResponse> = FACTOR_NAMES
        .iter()
        .enumerate()
        .map(|(f, name)| {
            let means = level_means(design, y, f);
            let max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = means.iter().copied().fold(f64::INFINITY, f64::min);
            let best_level = means.iter().position(|&m| m == max).unwrap_or(0);
            FactorResponse { factor: name.to_string(), level_means: means, delta: max - min, rank: 0, best_level }
        })
        .collect();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| factors[b].delta.total_cmp(&factors[a].delta).then(a.cmp(&b)));
    for (position, &f) in order.iter().enumerate() {
        factors[f].rank = position + 1;
    }
    Ok(ResponseTable { factors })
}

/// Full analysis of a response matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuningAnalysis {
    pub run_means: Vec<f64>,
    pub sn_ratios: Vec<f64>,
    pub anova: AnovaTable,
    pub response_table: ResponseTable,
    pub recommended: (f64, f64, usize),
}

pub fn analyze(design: &L9Design, responses: &[Vec<f64>]) -> Result<TuningAnalysis, DoeError> {
    if responses.len() != 9 {
        return Err(DoeError::WrongResponseCount(responses.len()));
    }
    let means = run_means(responses)?;
    let sn_ratios = responses.iter().map(|r| sn_ratio_ltb(r)).collect::<Result<Vec<_>, _>>()?;
    let anova = anova(design, &means)?;
    let response_table = response_table(design, &means)?;
    let recommended = response_table.recommended(&design.levels);
    Ok(TuningAnalysis { run_means: means, sn_ratios, anova, response_table, recommended })
}
