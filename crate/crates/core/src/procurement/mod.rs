//! Order allocation and the procurement cost model.
//!
//! A plan assigns `q[j][k]` (material `j`, supplier `k`). Its cost is the
//! purchase price plus a non-compliance penalty: one week of delay cost when
//! any delivered material is defective, plus one day of delay cost for every
//! late-delivery day.

pub mod instance;
pub mod units;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

pub use instance::{FitnessWeights, Material, ProblemInstance, SupplierOffer};
pub use units::{Money, Percent, Quantity};

/// Days of delay charged when a delivery contains defective material.
pub const REPLACEMENT_DAYS: u64 = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid problem instance: {0}")]
    InvalidInstance(String),
    #[error("invalid rank permutation: {0}")]
    InvalidRanks(String),
    #[error("cannot select {k} of {n} suppliers")]
    InvalidSelection { k: usize, n: usize },
    #[error("insufficient capacity for material '{material}': top {k} suppliers fall {shortfall} t short of demand")]
    InsufficientCapacity { material: String, k: usize, shortfall: Quantity },
    #[error("unknown objective mode '{0}' (expected 'paper-fitness' or 'min-cost')")]
    UnknownMode(String),
}

/// Checks that `ranks` is a permutation of `1..=n`.
pub fn validate_ranks(ranks: &[usize], n: usize) -> Result<(), ModelError> {
    if ranks.len() != n {
        return Err(ModelError::InvalidRanks(format!("expected {n} ranks, got {}", ranks.len())));
    }
    let mut seen = vec![false; n];
    for &r in ranks {
        if r == 0 || r > n {
            return Err(ModelError::InvalidRanks(format!("rank {r} outside 1..={n}")));
        }
        if std::mem::replace(&mut seen[r - 1], true) {
            return Err(ModelError::InvalidRanks(format!("rank {r} appears twice")));
        }
    }
    Ok(())
}

/// Supplier indices ordered by rank, best first.
pub fn rank_order(ranks: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ranks.len()).collect();
    order.sort_by_key(|&i| ranks[i]);
    order
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderPlan {
    /// `quantities[j][k]`: material `j` from supplier `k`.
    pub quantities: Vec<Vec<Quantity>>,
    /// Rank permutation the plan was allocated from, when there is one.
    pub source_ranks: Option<Vec<usize>>,
}

impl OrderPlan {
    pub fn zeros(materials: usize, suppliers: usize) -> Self {
        Self { quantities: vec![vec![Quantity::ZERO; suppliers]; materials], source_ranks: None }
    }

    /// Total quantity ordered from supplier `k` across materials.
    pub fn supplier_total(&self, k: usize) -> Quantity {
        self.quantities.iter().map(|row| row[k]).sum()
    }

    /// Suppliers receiving a nonzero quantity of anything.
    pub fn active_suppliers(&self) -> Vec<usize> {
        let n = self.quantities.first().map_or(0, Vec::len);
        (0..n).filter(|&k| self.supplier_total(k) > Quantity::ZERO).collect()
    }
}

/// Greedy allocation: per material, fill the top-`k` ranked suppliers in rank
/// order, each up to its capacity, until demand is met.
pub fn allocate(inst: &ProblemInstance, ranks: &[usize], k: usize) -> Result<OrderPlan, ModelError> {
    let n = inst.supplier_count();
    validate_ranks(ranks, n)?;
    if k == 0 || k > n {
        return Err(ModelError::InvalidSelection { k, n });
    }
    let top = &rank_order(ranks)[..k];
    let mut plan = OrderPlan::zeros(inst.materials().len(), n);
    for (j, material) in inst.materials().iter().enumerate() {
        let mut remaining = material.demand;
        for &s in top {
            if remaining == Quantity::ZERO {
                break;
            }
            let q = inst.suppliers()[s].capacity[j].min(remaining);
            plan.quantities[j][s] = q;
            remaining = remaining - q;
        }
        if remaining > Quantity::ZERO {
            return Err(ModelError::InsufficientCapacity {
                material: material.id.clone(),
                k,
                shortfall: remaining,
            });
        }
    }
    plan.source_ranks = Some(ranks.to_vec());
    Ok(plan)
}

/// Sum of `unit_cost * q`, with quantities in kilograms.
pub fn procurement_cost(inst: &ProblemInstance, plan: &OrderPlan) -> Money {
    plan.quantities
        .iter()
        .enumerate()
        .flat_map(|(j, row)| {
            row.iter()
                .zip(inst.suppliers())
                .map(move |(q, s)| s.unit_cost[j].scale(q.kg()))
        })
        .sum()
}

/// Per-supplier integer counts and their total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitCounts {
    pub per_supplier: Vec<u64>,
    pub total: u64,
}

fn per_cell_counts(
    inst: &ProblemInstance,
    plan: &OrderPlan,
    count: impl Fn(&SupplierOffer, usize, Quantity) -> u64,
) -> UnitCounts {
    let per_supplier: Vec<u64> = inst
        .suppliers()
        .iter()
        .enumerate()
        .map(|(k, s)| plan.quantities.iter().enumerate().map(|(j, row)| count(s, j, row[k])).sum())
        .collect();
    let total = per_supplier.iter().sum();
    UnitCounts { per_supplier, total }
}

/// Defective tons per supplier, `q * defect% / 100` rounded half up.
pub fn defective_units(inst: &ProblemInstance, plan: &OrderPlan) -> UnitCounts {
    per_cell_counts(inst, plan, |s, j, q| s.defect_pct[j].round_half_up_tons(q))
}

/// Late-delivery days per supplier, `q * delay% / 100` rounded up.
pub fn delay_days(inst: &ProblemInstance, plan: &OrderPlan) -> UnitCounts {
    per_cell_counts(inst, plan, |s, j, q| s.delay_pct[j].ceil_tons(q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Noncompliance {
    pub quality_cost: Money,
    pub delay_cost: Money,
    pub total: Money,
}

/// `(7 + delay days) * daily rate`, where the 7-day term applies only when
/// something was defective.
pub fn noncompliance_cost(defects: u64, delay_days: u64, daily_rate: Money) -> Noncompliance {
    let quality_cost = if defects > 0 { daily_rate.scale(REPLACEMENT_DAYS) } else { Money::ZERO };
    let delay_cost = daily_rate.scale(delay_days);
    Noncompliance { quality_cost, delay_cost, total: quality_cost + delay_cost }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub procurement: Money,
    pub defectives: UnitCounts,
    pub delays: UnitCounts,
    pub quality_cost: Money,
    pub delay_cost: Money,
    pub noncompliance: Money,
    pub total: Money,
    pub fitness: f64,
}

impl CostBreakdown {
    pub fn defective_units(&self) -> u64 {
        self.defectives.total
    }

    pub fn delay_days(&self) -> u64 {
        self.delays.total
    }
}

pub fn total_cost(inst: &ProblemInstance, plan: &OrderPlan) -> CostBreakdown {
    let procurement = procurement_cost(inst, plan);
    let defectives = defective_units(inst, plan);
    let delays = delay_days(inst, plan);
    let nc = noncompliance_cost(defectives.total, delays.total, inst.delay_cost_rate());
    let mut breakdown = CostBreakdown {
        procurement,
        defectives,
        delays,
        quality_cost: nc.quality_cost,
        delay_cost: nc.delay_cost,
        noncompliance: nc.total,
        total: procurement + nc.total,
        fitness: 0.0,
    };
    breakdown.fitness = fitness(&breakdown, inst.weights());
    breakdown
}

/// `T/(T + quality)·w1 + T/(T + delay)·w2` with `T` the total cost.
pub fn fitness(b: &CostBreakdown, w: FitnessWeights) -> f64 {
    let total = b.total.paise() as f64;
    let ratio = |penalty: Money| {
        if penalty == Money::ZERO {
            1.0
        } else {
            total / (total + penalty.paise() as f64)
        }
    };
    ratio(b.quality_cost) * w.w1 + ratio(b.delay_cost) * w.w2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveMode {
    /// The weighted cost-ratio fitness.
    PaperFitness,
    /// `reference_total / total`; larger is cheaper.
    #[default]
    MinCost,
}

impl FromStr for ObjectiveMode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, ModelError> {
        match s {
            "paper-fitness" => Ok(ObjectiveMode::PaperFitness),
            "min-cost" => Ok(ObjectiveMode::MinCost),
            other => Err(ModelError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for ObjectiveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectiveMode::PaperFitness => "paper-fitness",
            ObjectiveMode::MinCost => "min-cost",
        })
    }
}

/// Maximize-direction score for a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective {
    pub mode: ObjectiveMode,
    /// Total cost of the reference (initial) plan; used by `MinCost`.
    pub reference_total: Money,
}

impl Objective {
    pub fn new(mode: ObjectiveMode, reference: &CostBreakdown) -> Self {
        Self { mode, reference_total: reference.total }
    }

    pub fn score(&self, b: &CostBreakdown) -> f64 {
        match self.mode {
            ObjectiveMode::PaperFitness => b.fitness,
            ObjectiveMode::MinCost => {
                if b.total == Money::ZERO {
                    if self.reference_total == Money::ZERO { 1.0 } else { f64::INFINITY }
                } else {
                    self.reference_total.paise() as f64 / b.total.paise() as f64
                }
            }
        }
    }
}

pub fn objective_score(inst: &ProblemInstance, plan: &OrderPlan, objective: &Objective) -> f64 {
    objective.score(&total_cost(inst, plan))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    OverCapacity { material: String, supplier: String, quantity: Quantity, capacity: Quantity },
    DemandShortfall { material: String, supplied: Quantity, demand: Quantity },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OverCapacity { material, supplier, quantity, capacity } => write!(
                f,
                "supplier '{supplier}' asked for {quantity} t of '{material}' but can supply {capacity} t"
            ),
            Violation::DemandShortfall { material, supplied, demand } => {
                write!(f, "material '{material}': {supplied} t ordered, {demand} t required")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Surplus {
    pub material: String,
    pub supplied: Quantity,
    pub demand: Quantity,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Feasibility {
    pub violations: Vec<Violation>,
    /// Over-ordering is allowed by the constraints but only adds cost.
    pub surplus: Vec<Surplus>,
}

impl Feasibility {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_feasible(inst: &ProblemInstance, plan: &OrderPlan) -> Feasibility {
    let mut out = Feasibility::default();
    for (j, material) in inst.materials().iter().enumerate() {
        let row = &plan.quantities[j];
        for (s, &q) in inst.suppliers().iter().zip(row) {
            if q > s.capacity[j] {
                out.violations.push(Violation::OverCapacity {
                    material: material.id.clone(),
                    supplier: s.id.clone(),
                    quantity: q,
                    capacity: s.capacity[j],
                });
            }
        }
        let supplied: Quantity = row.iter().copied().sum();
        if supplied < material.demand {
            out.violations.push(Violation::DemandShortfall {
                material: material.id.clone(),
                supplied,
                demand: material.demand,
            });
        } else if supplied > material.demand {
            out.surplus.push(Surplus { material: material.id.clone(), supplied, demand: material.demand });
        }
    }
    out
}
