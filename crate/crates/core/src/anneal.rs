//! Simulated annealing over supplier rank permutations.
//!
//! A solution is a rank vector (`ranks[i]` is the rank of supplier `i`). The
//! neighbourhood swaps the ranks of two suppliers; every candidate is turned
//! into an order plan by greedy allocation over the top-`k` ranked suppliers
//! and scored in the maximize direction.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::procurement::{
    allocate, rank_order, total_cost, validate_ranks, CostBreakdown, ModelError, Money, Objective,
    ObjectiveMode, OrderPlan, ProblemInstance, Quantity,
};
use crate::rng::Xoshiro256;

/// Largest supplier count accepted by [`brute_force`].
pub const BRUTE_FORCE_MAX_SUPPLIERS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SaError {
    #[error("invalid annealing parameters: {0}")]
    InvalidParams(String),
    #[error("need at least 2 suppliers to exchange ranks, got {0}")]
    DegenerateProblem(usize),
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
    #[error("initial solution is infeasible: {0}")]
    InfeasibleInitial(ModelError),
    #[error("exhaustive search supports at most {max} suppliers, got {n}", max = BRUTE_FORCE_MAX_SUPPLIERS)]
    TooLarge { n: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaParams {
    pub t_init: f64,
    pub alpha: f64,
    /// Candidate moves evaluated per temperature level.
    pub markov_len: usize,
    /// Search stops once the temperature drops below this.
    pub t_min: f64,
    pub max_iters: usize,
    /// Consecutive evaluations without improving the best score before stopping.
    pub stagnation_limit: usize,
    pub seed: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            t_init: 30.0,
            alpha: 0.75,
            markov_len: 20,
            t_min: 1e-3,
            max_iters: 1000,
            stagnation_limit: 50,
            seed: 42,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<(), SaError> {
        let bad = |m: String| Err(SaError::InvalidParams(m));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if self.markov_len == 0 {
            return bad("Markov chain length must be at least 1".into());
        }
        if !(self.t_min >= 0.0 && self.t_init > self.t_min && self.t_init.is_finite()) {
            return bad(format!(
                "need t_init > t_min >= 0, got t_init {} and t_min {}",
                self.t_init, self.t_min
            ));
        }
        Ok(())
    }
}

/// `ranks[i]` is the rank of supplier `i`, a permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RankSolution(Vec<usize>);

impl RankSolution {
    pub fn new(ranks: Vec<usize>) -> Result<Self, ModelError> {
        validate_ranks(&ranks, ranks.len())?;
        Ok(Self(ranks))
    }

    /// Ranks that list suppliers in the given order, best first.
    pub fn from_order(order: &[usize]) -> Result<Self, ModelError> {
        let mut ranks = vec![0; order.len()];
        for (position, &s) in order.iter().enumerate() {
            if s >= ranks.len() {
                return Err(ModelError::InvalidRanks(format!("supplier index {s} out of range")));
            }
            ranks[s] = position + 1;
        }
        Self::new(ranks)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy with the ranks of suppliers `a` and `b` exchanged.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut ranks = self.0.clone();
        ranks.swap(a, b);
        Self(ranks)
    }

    /// Supplier indices, best first.
    pub fn order(&self) -> Vec<usize> {
        rank_order(&self.0)
    }
}

/// Swaps the ranks of two distinct, uniformly chosen suppliers.
pub fn exchange_move(s: &RankSolution, rng: &mut Xoshiro256) -> Result<RankSolution, SaError> {
    let n = s.len();
    if n < 2 {
        return Err(SaError::DegenerateProblem(n));
    }
    let a = rng.below(n);
    let mut b = rng.below(n);
    while b == a {
        b = rng.below(n);
    }
    Ok(s.swapped(a, b))
}

/// Accept iff `exp(delta / t) > r`.
pub fn metropolis(delta: f64, t: f64, r: f64) -> Result<bool, SaError> {
    if !(t > 0.0) {
        return Err(SaError::NonPositiveTemperature(t));
    }
    Ok((delta / t).exp() > r)
}

pub fn cool(t: f64, alpha: f64) -> f64 {
    alpha * t
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub ranks: RankSolution,
    pub plan: OrderPlan,
    pub breakdown: CostBreakdown,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub temperature: f64,
    pub current_score: f64,
    pub best_score: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchTrace {
    /// Row 0 is the evaluation of the initial solution.
    pub records: Vec<TraceRecord>,
    /// Candidate moves evaluated (excludes the initial evaluation).
    pub iterations: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub const TRACE_CSV_HEADER: &str = "iter,temperature,current_score,best_score,accepted";

impl SearchTrace {
    /// One row per record under [`TRACE_CSV_HEADER`]. Floats use shortest
    /// round-trip formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(TRACE_CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.iter, r.temperature, r.current_score, r.best_score, r.accepted
            );
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaOutcome {
    pub initial: Solution,
    pub best: Solution,
    pub trace: SearchTrace,
}

struct Evaluator<'a> {
    inst: &'a ProblemInstance,
    objective: Objective,
}

impl Evaluator<'_> {
    fn evaluate(&self, ranks: RankSolution) -> Result<Solution, ModelError> {
        let plan = allocate(self.inst, ranks.ranks(), self.inst.k_select())?;
        let breakdown = total_cost(self.inst, &plan);
        let score = self.objective.score(&breakdown);
        Ok(Solution { ranks, plan, breakdown, score })
    }
}

/// Evaluates a ranking without searching.
pub fn evaluate(inst: &ProblemInstance, ranks: &RankSolution, mode: ObjectiveMode) -> Result<Solution, ModelError> {
    let plan = allocate(inst, ranks.ranks(), inst.k_select())?;
    let breakdown = total_cost(inst, &plan);
    let score = Objective::new(mode, &breakdown).score(&breakdown);
    Ok(Solution { ranks: ranks.clone(), plan, breakdown, score })
}

/// Anneals from `s0`.
///
/// Each temperature level evaluates `markov_len` exchange moves. A candidate
/// that beats the best score becomes both current and best; one that ties the
/// best becomes current; anything else is accepted by the Metropolis rule
/// against the current score. Candidates whose allocation is infeasible are
/// rejected. The run ends when the temperature falls below `t_min`, after
/// `stagnation_limit` consecutive evaluations without a new best, or after
/// `max_iters` evaluations.
pub fn solve(
    inst: &ProblemInstance,
    s0: &RankSolution,
    params: &SaParams,
    mode: ObjectiveMode,
) -> Result<SaOutcome, SaError> {
    params.validate()?;
    let started = Instant::now();
    let n = inst.supplier_count();
    if s0.len() != n {
        return Err(ModelError::InvalidRanks(format!("expected {n} ranks, got {}", s0.len())).into());
    }
    let initial_plan = allocate(inst, s0.ranks(), inst.k_select()).map_err(SaError::InfeasibleInitial)?;
    let initial_breakdown = total_cost(inst, &initial_plan);
    let eval = Evaluator { inst, objective: Objective::new(mode, &initial_breakdown) };
    let initial = Solution {
        ranks: s0.clone(),
        plan: initial_plan,
        score: eval.objective.score(&initial_breakdown),
        breakdown: initial_breakdown,
    };

    let mut rng = Xoshiro256::seed_from_u64(params.seed);
    let mut current = initial.clone();
    let mut best = initial.clone();
    let mut t = params.t_init;
    let mut records = vec![TraceRecord {
        iter: 0,
        temperature: t,
        current_score: current.score,
        best_score: best.score,
        accepted: true,
    }];
    let mut iter = 0;
    let mut stagnation = 0;

    if params.stagnation_limit > 0 && n >= 2 {
        'levels: while t >= params.t_min && iter < params.max_iters {
            for _ in 0..params.markov_len {
                let candidate = exchange_move(&current.ranks, &mut rng)?;
                iter += 1;
                let mut accepted = false;
                let mut improved = false;
                if let Ok(sol) = eval.evaluate(candidate) {
                    if sol.score > best.score {
                        best = sol.clone();
                        current = sol;
                        accepted = true;
                        improved = true;
                    } else if sol.score == best.score {
                        current = sol;
                        accepted = true;
                    } else {
                        let delta = sol.score - current.score;
                        let r = rng.next_f64();
                        if metropolis(delta, t, r)? {
                            current = sol;
                            accepted = true;
                        }
                    }
                }
                stagnation = if improved { 0 } else { stagnation + 1 };
                records.push(TraceRecord {
                    iter,
                    temperature: t,
                    current_score: current.score,
                    best_score: best.score,
                    accepted,
                });
                if stagnation >= params.stagnation_limit || iter >= params.max_iters {
                    break 'levels;
                }
            }
            t = cool(t, params.alpha);
        }
    }

    Ok(SaOutcome {
        initial,
        best,
        trace: SearchTrace { records, iterations: iter, elapsed: started.elapsed() },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteForceResult {
    pub ranks: RankSolution,
    pub plan: OrderPlan,
    pub breakdown: CostBreakdown,
    /// Ordered selections examined, feasible or not.
    pub enumerated: usize,
    pub feasible: usize,
}

/// Minimum-total plan over every ordered selection of `k` suppliers.
/// Equal totals keep the selection whose supplier ids sort first.
pub fn brute_force(inst: &ProblemInstance, k: usize) -> Result<BruteForceResult, SaError> {
    let n = inst.supplier_count();
    if n > BRUTE_FORCE_MAX_SUPPLIERS {
        return Err(SaError::TooLarge { n });
    }
    if k == 0 || k > n {
        return Err(ModelError::InvalidSelection { k, n }.into());
    }

    struct Search<'a> {
        inst: &'a ProblemInstance,
        k: usize,
        enumerated: usize,
        feasible: usize,
        best: Option<(Money, Vec<&'a str>, RankSolution, OrderPlan, CostBreakdown)>,
    }

    impl<'a> Search<'a> {
        fn visit(&mut self, chosen: &mut Vec<usize>, used: &mut [bool]) {
            if chosen.len() == self.k {
                self.enumerated += 1;
                let mut order = chosen.clone();
                order.extend((0..used.len()).filter(|&s| !used[s]));
                let ranks = RankSolution::from_order(&order).expect("order is a permutation");
                let Ok(plan) = allocate(self.inst, ranks.ranks(), self.k) else { return };
                self.feasible += 1;
                let breakdown = total_cost(self.inst, &plan);
                let ids: Vec<&str> = chosen.iter().map(|&s| self.inst.suppliers()[s].id.as_str()).collect();
                let better = match &self.best {
                    None => true,
                    Some((total, best_ids, ..)) => {
                        breakdown.total < *total || (breakdown.total == *total && ids < *best_ids)
                    }
                };
                if better {
                    self.best = Some((breakdown.total, ids, ranks, plan, breakdown));
                }
                return;
            }
            for s in 0..used.len() {
                if !used[s] {
                    used[s] = true;
                    chosen.push(s);
                    self.visit(chosen, used);
                    chosen.pop();
                    used[s] = false;
                }
            }
        }
    }

    let mut search = Search { inst, k, enumerated: 0, feasible: 0, best: None };
    search.visit(&mut Vec::with_capacity(k), &mut vec![false; n]);
    let (enumerated, feasible) = (search.enumerated, search.feasible);
    match search.best {
        Some((_, _, ranks, plan, breakdown)) => Ok(BruteForceResult { ranks, plan, breakdown, enumerated, feasible }),
        None => {
            // nothing feasible: report the shortfall of the k largest suppliers
            let capacity = |s: usize| inst.suppliers()[s].capacity.iter().copied().sum::<Quantity>();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&s| std::cmp::Reverse(capacity(s)));
            let ranks = RankSolution::from_order(&order)?;
            Err(allocate(inst, ranks.ranks(), k).expect_err("no feasible selection").into())
        }
    }
}
