//! Supplier selection: AHP ranking, cost-model order allocation, simulated
//! annealing over supplier ranks, and L9 Taguchi tuning of the annealer.

pub mod ahp;
pub mod anneal;
pub mod procurement;
pub mod rng;
pub mod taguchi;

pub use ahp::{AhpError, CompositeRanking, ConsistencyReport, Hierarchy, PairwiseMatrix, PriorityVector};
pub use anneal::{brute_force, solve, RankSolution, SaError, SaOutcome, SaParams, SearchTrace};
pub use procurement::{CostBreakdown, ModelError, Money, ObjectiveMode, OrderPlan, ProblemInstance, Quantity};
pub use taguchi::{build_l9, DoeError, FactorLevels, L9Design};
