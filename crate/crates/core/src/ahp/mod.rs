//! Analytic Hierarchy Process.
//!
//! Pairwise judgment matrices are validated on construction, weighted by the
//! principal eigenvector (estimated through repeated squaring of the matrix),
//! checked for consistency, and combined across a three-level hierarchy
//! (goal, criteria, alternatives) into one composite score per alternative.

pub mod judgments;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Squaring loop stops once successive normalized row-sum vectors differ by
/// less than this in every component.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Upper bound on the number of matrix squarings.
pub const DEFAULT_MAX_SQUARINGS: usize = 50;
/// Conventional acceptability threshold on the consistency ratio.
pub const CR_THRESHOLD: f64 = 0.1;

const RECIPROCITY_TOL: f64 = 1e-9;
const ZERO_WEIGHT: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AhpError {
    #[error("matrix must have at least 2 rows, got {0}")]
    TooSmall(usize),
    #[error("matrix is not square: row {row} has {len} entries, expected {n}")]
    NonSquare { row: usize, len: usize, n: usize },
    #[error("expected {n} labels, got {got}")]
    LabelMismatch { n: usize, got: usize },
    #[error("entry ({row}, {col}) must be strictly positive and finite, got {value}")]
    NonPositiveEntry { row: usize, col: usize, value: f64 },
    #[error("diagonal entry ({index}, {index}) must equal 1, got {value}")]
    BadDiagonal { index: usize, value: f64 },
    #[error("entries ({row}, {col}) and ({col}, {row}) are not reciprocal: product {product}")]
    BrokenReciprocity { row: usize, col: usize, product: f64 },
    #[error("eigenvector did not converge after {squarings} squarings (max |D| = {residual:e})")]
    NoConvergence { squarings: usize, residual: f64 },
    #[error("matrix entries left the representable range while squaring")]
    NumericOverflow,
    #[error("priority weight {index} is zero; eigenvalue ratio undefined")]
    ZeroWeight { index: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, AhpError>;

/// Judgment that falls outside the 1..9 scale and its reciprocals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleWarning {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl fmt::Display for ScaleWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "entry ({}, {}) = {} is not on the 1-9 judgment scale",
            self.row, self.col, self.value
        )
    }
}

/// Positive reciprocal judgment matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseMatrix {
    n: usize,
    entries: Vec<f64>,
    labels: Vec<String>,
}

impl PairwiseMatrix {
    /// Validates a raw square array of judgments.
    pub fn validate(raw: &[Vec<f64>], labels: &[String]) -> Result<Self> {
        let n = raw.len();
        if n < 2 {
            return Err(AhpError::TooSmall(n));
        }
        for (row, r) in raw.iter().enumerate() {
            if r.len() != n {
                return Err(AhpError::NonSquare { row, len: r.len(), n });
            }
        }
        if labels.len() != n {
            return Err(AhpError::LabelMismatch { n, got: labels.len() });
        }
        for (row, r) in raw.iter().enumerate() {
            for (col, &value) in r.iter().enumerate() {
                if !(value.is_finite() && value > 0.0) {
                    return Err(AhpError::NonPositiveEntry { row, col, value });
                }
            }
        }
        for (index, r) in raw.iter().enumerate() {
            if r[index] != 1.0 {
                return Err(AhpError::BadDiagonal { index, value: r[index] });
            }
        }
        for row in 0..n {
            for col in row + 1..n {
                let product = raw[row][col] * raw[col][row];
                if (product - 1.0).abs() > RECIPROCITY_TOL {
                    return Err(AhpError::BrokenReciprocity { row, col, product });
                }
            }
        }
        Ok(Self {
            n,
            entries: raw.iter().flatten().copied().collect(),
            labels: labels.to_vec(),
        })
    }

    /// Builds the perfectly consistent matrix `a_ij = w_i / w_j`.
    pub fn from_weights(weights: &[f64], labels: &[String]) -> Result<Self> {
        let raw: Vec<Vec<f64>> = weights
            .iter()
            .enumerate()
            .map(|(i, wi)| {
                weights
                    .iter()
                    .enumerate()
                    .map(|(j, wj)| if i == j { 1.0 } else { wi / wj })
                    .collect()
            })
            .collect();
        Self::validate(&raw, labels)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.n)
    }

    /// Entries whose value is not in {1..9} or {1/2..1/9}. Non-fatal.
    pub fn scale_warnings(&self) -> Vec<ScaleWarning> {
        let mut out = Vec::new();
        for row in 0..self.n {
            for col in 0..self.n {
                let value = self.get(row, col);
                if !on_saaty_scale(value) {
                    out.push(ScaleWarning { row, col, value });
                }
            }
        }
        out
    }

    /// Same judgments with items reordered: new item `i` is old item `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let raw: Vec<Vec<f64>> = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        let labels: Vec<String> = order.iter().map(|&i| self.labels[i].clone()).collect();
        Self::validate(&raw, &labels)
    }
}

fn on_saaty_scale(value: f64) -> bool {
    (1..=9).any(|k| {
        let k = k as f64;
        (value - k).abs() <= 1e-9 * k || (value * k - 1.0).abs() <= 1e-9
    })
}

/// Normalized nonnegative weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriorityVector {
    weights: Vec<f64>,
}

impl PriorityVector {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn normalized(raw: Vec<f64>) -> Result<Self> {
        let total: f64 = raw.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(AhpError::NumericOverflow);
        }
        Ok(Self { weights: raw.into_iter().map(|w| w / total).collect() })
    }
}

fn square_rescaled(a: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                out[i * n + j] += aik * a[k * n + j];
            }
        }
    }
    rescale(&mut out)?;
    Ok(out)
}

fn rescale(a: &mut [f64]) -> Result<()> {
    let max = a.iter().copied().fold(0.0_f64, f64::max);
    if !(max.is_finite() && max > 0.0) || a.iter().any(|v| !v.is_finite()) {
        return Err(AhpError::NumericOverflow);
    }
    a.iter_mut().for_each(|v| *v /= max);
    Ok(())
}

fn row_sums(a: &[f64], n: usize) -> Result<PriorityVector> {
    PriorityVector::normalized(a.chunks(n).map(|r| r.iter().sum()).collect())
}

/// Principal eigenvector by repeated squaring.
///
/// Each pass squares the matrix, normalizes its row sums, and compares the
/// result with the previous pass. The matrix is rescaled by its largest entry
/// after every squaring; this leaves the limiting direction unchanged.
pub fn principal_eigenvector(
    m: &PairwiseMatrix,
    tol: f64,
    max_squarings: usize,
) -> Result<PriorityVector> {
    let n = m.n;
    let mut a = m.entries.clone();
    rescale(&mut a)?;
    a = square_rescaled(&a, n)?;
    let mut previous = row_sums(&a, n)?;
    let mut squarings = 1;
    let mut residual = f64::INFINITY;
    while squarings < max_squarings {
        a = square_rescaled(&a, n)?;
        squarings += 1;
        let current = row_sums(&a, n)?;
        residual = current
            .weights
            .iter()
            .zip(&previous.weights)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if residual < tol {
            return Ok(current);
        }
        previous = current;
    }
    Err(AhpError::NoConvergence { squarings, residual })
}

/// Mean of `(A x)_i / x_i`.
pub fn lambda_max(m: &PairwiseMatrix, pv: &PriorityVector) -> Result<f64> {
    if pv.len() != m.n {
        return Err(AhpError::DimensionMismatch(format!(
            "matrix has {} rows, priority vector has {}",
            m.n,
            pv.len()
        )));
    }
    let x = &pv.weights;
    if let Some(index) = x.iter().position(|&w| w <= ZERO_WEIGHT) {
        return Err(AhpError::ZeroWeight { index });
    }
    let total: f64 = m
        .rows()
        .zip(x)
        .map(|(row, xi)| row.iter().zip(x).map(|(a, xj)| a * xj).sum::<f64>() / xi)
        .sum();
    Ok(total / m.n as f64)
}

/// Random consistency index `1.98 (n - 2) / n`.
pub fn random_index(n: usize) -> f64 {
    1.98 * (n as f64 - 2.0) / n as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub n: usize,
    pub lambda_max: f64,
    pub ci: f64,
    pub ri: f64,
    pub cr: f64,
    /// `cr < 0.1`.
    pub acceptable: bool,
    /// Set for 2x2 matrices, where the random index is zero.
    pub ri_undefined: bool,
}

pub fn consistency(m: &PairwiseMatrix) -> Result<ConsistencyReport> {
    let pv = principal_eigenvector(m, DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS)?;
    consistency_with(m, &pv)
}

/// Consistency measures given an already computed priority vector.
pub fn consistency_with(m: &PairwiseMatrix, pv: &PriorityVector) -> Result<ConsistencyReport> {
    let n = m.n;
    let lambda = lambda_max(m, pv)?;
    let ri = random_index(n);
    if n == 2 {
        return Ok(ConsistencyReport {
            n,
            lambda_max: lambda,
            ci: 0.0,
            ri,
            cr: 0.0,
            acceptable: true,
            ri_undefined: true,
        });
    }
    let ci = (lambda - n as f64) / (n as f64 - 1.0);
    let cr = ci / ri;
    Ok(ConsistencyReport {
        n,
        lambda_max: lambda,
        ci,
        ri,
        cr,
        acceptable: cr < CR_THRESHOLD,
        ri_undefined: false,
    })
}

/// Goal / criteria / alternatives.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    criteria: PairwiseMatrix,
    alternatives: Vec<PairwiseMatrix>,
}

impl Hierarchy {
    pub fn new(criteria: PairwiseMatrix, alternatives: Vec<PairwiseMatrix>) -> Result<Self> {
        if criteria.n != alternatives.len() {
            return Err(AhpError::DimensionMismatch(format!(
                "{} criteria but {} alternative matrices",
                criteria.n,
                alternatives.len()
            )));
        }
        let first = &alternatives[0];
        for (c, m) in alternatives.iter().enumerate().skip(1) {
            if m.n != first.n || m.labels != first.labels {
                return Err(AhpError::DimensionMismatch(format!(
                    "alternative matrix for criterion '{}' does not share the size and label order of '{}'",
                    criteria.labels[c], criteria.labels[0]
                )));
            }
        }
        Ok(Self { criteria, alternatives })
    }

    pub fn criteria(&self) -> &PairwiseMatrix {
        &self.criteria
    }

    pub fn alternative_matrices(&self) -> &[PairwiseMatrix] {
        &self.alternatives
    }

    pub fn alternative_labels(&self) -> &[String] {
        &self.alternatives[0].labels
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompositeRanking {
    pub labels: Vec<String>,
    pub scores: Vec<f64>,
    /// `ranks[i]` is the rank of alternative `i`; 1 is best.
    pub ranks: Vec<usize>,
}

impl CompositeRanking {
    fn from_scores(labels: Vec<String>, scores: Vec<f64>) -> Self {
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| {
            scores[b]
                .total_cmp(&scores[a])
                .then_with(|| labels[a].cmp(&labels[b]))
        });
        let mut ranks = vec![0; scores.len()];
        for (position, &i) in order.iter().enumerate() {
            ranks[i] = position + 1;
        }
        Self { labels, scores, ranks }
    }

    /// Alternative indices, best first.
    pub fn order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.ranks.len()).collect();
        order.sort_by_key(|&i| self.ranks[i]);
        order
    }
}

pub fn composite_scores(h: &Hierarchy) -> Result<CompositeRanking> {
    Ok(analyze(h)?.ranking)
}

/// Everything computed for a hierarchy, for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct HierarchyAnalysis {
    pub criteria_weights: PriorityVector,
    pub criteria_consistency: ConsistencyReport,
    pub alternative_weights: Vec<PriorityVector>,
    pub alternative_consistency: Vec<ConsistencyReport>,
    pub ranking: CompositeRanking,
}

impl HierarchyAnalysis {
    /// True when every matrix has CR below the threshold.
    pub fn all_acceptable(&self) -> bool {
        self.criteria_consistency.acceptable
            && self.alternative_consistency.iter().all(|c| c.acceptable)
    }
}

/// `score_a = sum_c w_c * alt_c[a]`, ranked by descending score.
pub fn weighted_composite(
    criteria_weights: &[f64],
    alternative_weights: &[PriorityVector],
    labels: &[String],
) -> CompositeRanking {
    let scores = (0..labels.len())
        .map(|a| {
            criteria_weights
                .iter()
                .zip(alternative_weights)
                .map(|(wc, alt)| wc * alt.weights[a])
                .sum()
        })
        .collect();
    CompositeRanking::from_scores(labels.to_vec(), scores)
}

pub fn analyze(h: &Hierarchy) -> Result<HierarchyAnalysis> {
    let pv = |m: &PairwiseMatrix| principal_eigenvector(m, DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS);
    let criteria_weights = pv(&h.criteria)?;
    let criteria_consistency = consistency_with(&h.criteria, &criteria_weights)?;
    let alternative_weights = h.alternatives.iter().map(pv).collect::<Result<Vec<_>>>()?;
    let alternative_consistency = h
        .alternatives
        .iter()
        .zip(&alternative_weights)
        .map(|(m, w)| consistency_with(m, w))
        .collect::<Result<Vec<_>>>()?;

    let ranking = weighted_composite(
        criteria_weights.weights(),
        &alternative_weights,
        h.alternative_labels(),
    );
    Ok(HierarchyAnalysis {
        criteria_weights,
        criteria_consistency,
        alternative_weights,
        alternative_consistency,
        ranking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("S{i}")).collect()
    }

    fn table2() -> PairwiseMatrix {
        let raw = vec![
            vec![1.0, 1.0 / 5.0, 1.0 / 9.0],
            vec![5.0, 1.0, 1.0 / 3.0],
            vec![9.0, 3.0, 1.0],
        ];
        PairwiseMatrix::validate(&raw, &labels(3)).unwrap()
    }

    fn table3() -> PairwiseMatrix {
        let raw = vec![
            vec![1.0, 3.0, 2.0, 7.0, 6.0, 5.0],
            vec![1.0 / 3.0, 1.0, 0.5, 5.0, 4.0, 3.0],
            vec![0.5, 2.0, 1.0, 4.0, 3.0, 2.0],
            vec![1.0 / 7.0, 0.2, 0.25, 1.0, 0.5, 0.25],
            vec![1.0 / 6.0, 0.25, 1.0 / 3.0, 2.0, 1.0, 1.0 / 3.0],
            vec![0.2, 1.0 / 3.0, 0.5, 4.0, 3.0, 1.0],
        ];
        PairwiseMatrix::validate(&raw, &labels(6)).unwrap()
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn validates_criteria_matrix() {
        let m = table2();
        assert_eq!(m.n(), 3);
        assert!(m.scale_warnings().is_empty());
    }

    #[test]
    fn all_ones_is_valid() {
        let raw = vec![vec![1.0; 4]; 4];
        assert!(PairwiseMatrix::validate(&raw, &labels(4)).is_ok());
    }

    #[test]
    fn rejects_broken_reciprocity() {
        let raw = vec![vec![1.0, 3.0, 1.0], vec![0.5, 1.0, 1.0], vec![1.0, 1.0, 1.0]];
        let err = PairwiseMatrix::validate(&raw, &labels(3)).unwrap_err();
        assert!(matches!(err, AhpError::BrokenReciprocity { row: 0, col: 1, .. }));
    }

    #[test]
    fn rejects_shape_and_sign_problems() {
        let ragged = vec![vec![1.0, 2.0], vec![0.5]];
        assert!(matches!(
            PairwiseMatrix::validate(&ragged, &labels(2)),
            Err(AhpError::NonSquare { row: 1, .. })
        ));
        let negative = vec![vec![1.0, -2.0], vec![-0.5, 1.0]];
        assert!(matches!(
            PairwiseMatrix::validate(&negative, &labels(2)),
            Err(AhpError::NonPositiveEntry { row: 0, col: 1, .. })
        ));
        let diag = vec![vec![2.0, 1.0], vec![1.0, 1.0]];
        assert!(matches!(
            PairwiseMatrix::validate(&diag, &labels(2)),
            Err(AhpError::BadDiagonal { index: 0, .. })
        ));
        assert!(matches!(
            PairwiseMatrix::validate(&[vec![1.0]], &labels(1)),
            Err(AhpError::TooSmall(1))
        ));
    }

    #[test]
    fn off_scale_entries_warn() {
        let raw = vec![vec![1.0, 2.5], vec![0.4, 1.0]];
        let m = PairwiseMatrix::validate(&raw, &labels(2)).unwrap();
        let w = m.scale_warnings();
        assert_eq!(w.len(), 2);
        assert_eq!((w[0].row, w[0].col), (0, 1));
    }

    #[test]
    fn eigenvector_of_criteria_matrix() {
        let pv = principal_eigenvector(&table2(), DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS).unwrap();
        assert_close(pv.weights(), &[0.0629, 0.2654, 0.6716], 1e-3);
    }

    #[test]
    fn eigenvector_of_cost_matrix() {
        let pv = principal_eigenvector(&table3(), DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS).unwrap();
        assert_close(
            pv.weights(),
            &[0.40201, 0.18549, 0.21024, 0.03831, 0.05611, 0.10786],
            1e-3,
        );
    }

    #[test]
    fn eigenvector_of_uniform_matrix() {
        let m = PairwiseMatrix::validate(&vec![vec![1.0; 3]; 3], &labels(3)).unwrap();
        let pv = principal_eigenvector(&m, DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS).unwrap();
        assert_eq!(pv.weights(), &[1.0 / 3.0; 3]);
    }

    #[test]
    fn eigenvector_of_consistent_matrix() {
        let w = [0.5, 0.25, 0.25];
        let m = PairwiseMatrix::from_weights(&w, &labels(3)).unwrap();
        let pv = principal_eigenvector(&m, DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS).unwrap();
        assert_close(pv.weights(), &w, 1e-9);
        assert!((lambda_max(&m, &pv).unwrap() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn single_squaring_cannot_converge() {
        let err = principal_eigenvector(&table2(), DEFAULT_TOLERANCE, 1).unwrap_err();
        assert!(matches!(err, AhpError::NoConvergence { squarings: 1, .. }));
    }

    #[test]
    fn huge_entries_do_not_overflow() {
        let raw = vec![vec![1.0, 1e150], vec![1e-150, 1.0]];
        let m = PairwiseMatrix::validate(&raw, &labels(2)).unwrap();
        let pv = principal_eigenvector(&m, DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS).unwrap();
        assert!(pv.weights()[0] > 0.999);
    }

    #[test]
    fn lambda_max_matches_consistency_table() {
        let m = table2();
        let pv = principal_eigenvector(&m, DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS).unwrap();
        assert!((lambda_max(&m, &pv).unwrap() - 3.0291).abs() < 2e-3);
        let m = table3();
        let pv = principal_eigenvector(&m, DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS).unwrap();
        assert!((lambda_max(&m, &pv).unwrap() - 6.2758).abs() < 5e-3);
    }

    #[test]
    fn lambda_max_rejects_zero_weight() {
        let m = table2();
        let pv = PriorityVector { weights: vec![0.5, 0.5, 0.0] };
        assert_eq!(lambda_max(&m, &pv), Err(AhpError::ZeroWeight { index: 2 }));
    }

    #[test]
    fn consistency_of_criteria_matrix() {
        let c = consistency(&table2()).unwrap();
        assert!((c.ci - 0.0145).abs() < 1e-3);
        assert!((c.ri - 0.66).abs() < 1e-12);
        assert!((c.cr - 0.022).abs() < 1e-3);
        assert!(c.acceptable && !c.ri_undefined);
    }

    #[test]
    fn consistency_of_two_by_two() {
        let raw = vec![vec![1.0, 4.0], vec![0.25, 1.0]];
        let m = PairwiseMatrix::validate(&raw, &labels(2)).unwrap();
        let c = consistency(&m).unwrap();
        assert_eq!(c.cr, 0.0);
        assert_eq!(c.ri, 0.0);
        assert!(c.ri_undefined);
    }

    #[test]
    fn single_criterion_composite_equals_its_weights() {
        let alt = table3();
        let pv = principal_eigenvector(&alt, DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS).unwrap();
        let other = PriorityVector::normalized(vec![1.0; 6]).unwrap();
        let r = weighted_composite(&[1.0, 0.0], &[pv.clone(), other], alt.labels());
        assert_close(&r.scores, pv.weights(), 1e-15);
        assert_eq!(r.ranks, vec![1, 3, 2, 6, 5, 4]);
    }

    #[test]
    fn identical_alternative_matrices_give_their_weights() {
        let alt = table3();
        let h = Hierarchy::new(table2(), vec![alt.clone(), alt.clone(), alt.clone()]).unwrap();
        let r = composite_scores(&h).unwrap();
        let pv = principal_eigenvector(&alt, DEFAULT_TOLERANCE, DEFAULT_MAX_SQUARINGS).unwrap();
        assert_close(&r.scores, pv.weights(), 1e-12);
    }

    #[test]
    fn hierarchy_rejects_mismatched_matrices() {
        let err = Hierarchy::new(table2(), vec![table3(), table3()]).unwrap_err();
        assert!(matches!(err, AhpError::DimensionMismatch(_)));
        let small = PairwiseMatrix::validate(&vec![vec![1.0; 3]; 3], &labels(3)).unwrap();
        let err = Hierarchy::new(table2(), vec![table3(), table3(), small]).unwrap_err();
        assert!(matches!(err, AhpError::DimensionMismatch(_)));
    }

    #[test]
    fn ties_rank_by_label() {
        let r = CompositeRanking::from_scores(
            vec!["b".into(), "a".into(), "c".into()],
            vec![0.25, 0.25, 0.5],
        );
        assert_eq!(r.ranks, vec![3, 2, 1]);
        assert_eq!(r.order(), vec![2, 1, 0]);
    }
}
