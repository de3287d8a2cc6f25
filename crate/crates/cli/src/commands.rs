use std::path::Path;

use anyhow::{bail, Context, Result};
use ssopt_core::ahp::{self, HierarchyAnalysis, CR_THRESHOLD};
use ssopt_core::anneal::{self, evaluate, Solution};
use ssopt_core::procurement::{check_feasible, Money};
use ssopt_core::taguchi::{self, build_l9, FactorLevels, L9Design, TuningAnalysis, FACTOR_NAMES};
use ssopt_core::{CostBreakdown, ProblemInstance, RankSolution, SaParams};

use crate::inputs::{self, Input};
use crate::report::{Cell, Report, Table};
use crate::{RankSource, SolveArgs, TuneArgs};

/// The case table this tool is usually checked against lists each total
/// exactly this much above the sum of its own components.
const TABULATED_TOTAL_OFFSET: Money = Money::from_rupees(1_000_000);

const REPORT_FILE: &str = "report.json";

pub struct Output {
    pub report: Report,
    /// `(file name, contents)` written under `--out`.
    pub files: Vec<(String, String)>,
    pub status: u8,
}

impl Output {
    pub fn new(report: Report, files: Vec<(String, String)>) -> Self {
        Self { report, files, status: 0 }
    }
}

pub fn write_outputs(dir: &Path, output: &Output) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let saved = serde_json::to_string_pretty(&output.report)?;
    for (name, contents) in output.files.iter().chain([&(REPORT_FILE.to_string(), saved)]) {
        let path = dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

pub fn load_report(dir: &Path) -> Result<Report> {
    let path = dir.join(REPORT_FILE);
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("no saved run in {} (missing {REPORT_FILE})", dir.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not a saved report", path.display()))
}

fn header(command: &str, fields: &[String]) -> String {
    let mut h = format!("# ssopt {command}");
    for f in fields {
        h.push(' ');
        h.push_str(f);
    }
    h
}

// ---------------------------------------------------------------- rank

fn consistency_table(a: &HierarchyAnalysis, criteria: &[String]) -> Table {
    let mut t = Table::new("Consistency", &["matrix", "n", "lambda_max", "CI", "RI", "CR", "status"]);
    let all = std::iter::once(("criteria".to_string(), &a.criteria_consistency))
        .chain(criteria.iter().cloned().zip(&a.alternative_consistency));
    for (name, c) in all {
        let status = if c.ri_undefined {
            "n/a (2x2)"
        } else if c.acceptable {
            "ok"
        } else {
            "INCONSISTENT"
        };
        t.push(vec![
            name.into(),
            c.n.into(),
            Cell::num(c.lambda_max, 5),
            Cell::num(c.ci, 5),
            if c.ri_undefined { Cell::Missing } else { Cell::num(c.ri, 2) },
            Cell::num(c.cr, 4),
            status.into(),
        ]);
    }
    t
}

/// Criteria weights, alternative weights, composite ranking and consistency.
fn ahp_tables(a: &HierarchyAnalysis, criteria: &[String]) -> Vec<Table> {
    let mut cw = Table::new("Criteria weights", &["criterion", "weight"]);
    for (c, w) in criteria.iter().zip(a.criteria_weights.weights()) {
        cw.push(vec![c.clone().into(), Cell::num(*w, 5)]);
    }

    let headers: Vec<&str> = std::iter::once("alternative").chain(criteria.iter().map(String::as_str)).collect();
    let mut aw = Table::new("Alternative weights per criterion", &headers);
    for (i, label) in a.ranking.labels.iter().enumerate() {
        let mut row = vec![Cell::text(label.clone())];
        row.extend(a.alternative_weights.iter().map(|pv| Cell::num(pv.weights()[i], 5)));
        aw.push(row);
    }

    let mut comp = Table::new("Composite scores", &["rank", "alternative", "score"]);
    for i in a.ranking.order() {
        comp.push(vec![a.ranking.ranks[i].into(), a.ranking.labels[i].clone().into(), Cell::num(a.ranking.scores[i], 4)]);
    }
    vec![cw, aw, comp, consistency_table(a, criteria)]
}

fn consistency_warnings(a: &HierarchyAnalysis, criteria: &[String], report: &mut Report) -> u8 {
    let mut status = 0;
    let all = std::iter::once(("criteria", &a.criteria_consistency))
        .chain(criteria.iter().map(String::as_str).zip(&a.alternative_consistency));
    for (name, c) in all {
        if !c.acceptable && !c.ri_undefined {
            report.warn(format!("matrix '{name}' has CR {:.4} >= {CR_THRESHOLD}; revise its judgments", c.cr));
            status = 1;
        }
    }
    status
}

struct AhpRun {
    input: Input,
    analysis: HierarchyAnalysis,
    criteria: Vec<String>,
    scale_notes: Vec<String>,
}

fn run_ahp(path: &Path) -> Result<AhpRun> {
    let (input, h) = inputs::judgments(path)?;
    let analysis = ahp::analyze(&h).with_context(|| format!("judgments file {}", path.display()))?;
    let criteria = h.criteria().labels().to_vec();
    let mut scale_notes: Vec<String> =
        h.criteria().scale_warnings().iter().map(|w| format!("criteria matrix: {w}")).collect();
    for (c, m) in criteria.iter().zip(h.alternative_matrices()) {
        scale_notes.extend(m.scale_warnings().iter().map(|w| format!("matrix '{c}': {w}")));
    }
    Ok(AhpRun { input, analysis, criteria, scale_notes })
}

pub fn rank(judgments: &Path) -> Result<Output> {
    let run = run_ahp(judgments)?;
    let mut report = Report::new(header("rank", &[run.input.provenance("judgments")]));
    let tables = ahp_tables(&run.analysis, &run.criteria);
    let files = ["criteria_weights.csv", "alternative_weights.csv", "ranking.csv", "consistency.csv"]
        .iter()
        .zip(&tables)
        .map(|(name, t)| (name.to_string(), t.to_csv()))
        .collect();
    for t in tables {
        report.table(t);
    }
    for note in &run.scale_notes {
        report.line(format!("note: {note}"));
    }
    let status = consistency_warnings(&run.analysis, &run.criteria, &mut report);
    Ok(Output { status, ..Output::new(report, files) })
}

// ---------------------------------------------------------------- solve

fn plan_table(title: &str, inst: &ProblemInstance, sol: &Solution) -> Table {
    let mut t = Table::new(
        title,
        &["material", "supplier", "rank", "quantity_t", "unit_cost", "cost", "defective", "late_days"],
    );
    let order = sol.ranks.order();
    for (j, material) in inst.materials().iter().enumerate() {
        for &k in &order {
            let q = sol.plan.quantities[j][k];
            if q.kg() == 0 {
                continue;
            }
            let s = &inst.suppliers()[k];
            t.push(vec![
                material.id.clone().into(),
                s.id.clone().into(),
                sol.ranks.ranks()[k].into(),
                quantity_cell(q),
                s.unit_cost[j].into(),
                Money::from_paise(s.unit_cost[j].paise() * q.kg() as i64).into(),
                s.defect_pct[j].round_half_up_tons(q).into(),
                s.delay_pct[j].ceil_tons(q).into(),
            ]);
        }
    }
    t
}

fn quantity_cell(q: ssopt_core::Quantity) -> Cell {
    Cell::num(q.tons(), if q.kg() % 1000 == 0 { 0 } else { 3 })
}

fn breakdown_table(title: &str, b: &CostBreakdown) -> Table {
    let mut t = Table::new(title, &["item", "amount"]);
    t.push(vec!["procurement cost".into(), b.procurement.into()]);
    t.push(vec!["quality cost".into(), b.quality_cost.into()]);
    t.push(vec!["delay cost".into(), b.delay_cost.into()]);
    t.push(vec!["total (component sum)".into(), b.total.into()]);
    t.push(vec!["tabulated total".into(), (b.total + TABULATED_TOTAL_OFFSET).into()]);
    t.push(vec!["defective units".into(), b.defective_units().into()]);
    t.push(vec!["late days".into(), b.delay_days().into()]);
    t.push(vec!["fitness".into(), Cell::num(b.fitness, 6)]);
    t
}

fn describe_plan(report: &mut Report, label: &str, inst: &ProblemInstance, sol: &Solution) {
    let order: Vec<&str> = sol.ranks.order().iter().map(|&k| inst.suppliers()[k].id.as_str()).collect();
    report.line(format!("{label} ranking: {}", order.join(" > ")));
    report.table(plan_table(&format!("{label} order plan"), inst, sol));
    report.table(breakdown_table(&format!("{label} cost breakdown"), &sol.breakdown));
}

fn offset_note(report: &mut Report) {
    report.line(format!(
        "note: 'tabulated total' adds a constant {} to the component sum, matching the reference case table; \
         the component sum is the model's total",
        TABULATED_TOTAL_OFFSET.grouped()
    ));
}

struct Ranking {
    ranks: RankSolution,
    provenance: Vec<String>,
    tables: Vec<Table>,
    status: u8,
    warnings: Vec<String>,
}

fn initial_ranking(source: &RankSource, inst: &ProblemInstance) -> Result<Ranking> {
    let n = inst.supplier_count();
    if let Some(path) = &source.judgments {
        let run = run_ahp(path)?;
        let labels = &run.analysis.ranking.labels;
        if labels.len() != n {
            bail!("judgments rank {} alternatives but the problem has {n} suppliers", labels.len());
        }
        let ranks = RankSolution::new(run.analysis.ranking.ranks.clone())?;
        let mut scratch = Report::default();
        let status = consistency_warnings(&run.analysis, &run.criteria, &mut scratch);
        let tables = ahp_tables(&run.analysis, &run.criteria).into_iter().skip(2).collect();
        return Ok(Ranking {
            ranks,
            provenance: vec![run.input.provenance("judgments")],
            tables,
            status,
            warnings: scratch.warnings,
        });
    }
    let ranks = match &source.ranks {
        Some(r) => RankSolution::new(r.clone()).context("--ranks")?,
        None => RankSolution::new((1..=n).collect())?,
    };
    let text: Vec<String> = ranks.ranks().iter().map(usize::to_string).collect();
    Ok(Ranking { ranks, provenance: vec![format!("ranks={}", text.join(","))], tables: vec![], status: 0, warnings: vec![] })
}

fn load_instance(path: &Path, k: Option<usize>) -> Result<(Input, ProblemInstance)> {
    let (input, inst) = inputs::problem(path)?;
    let inst = match k {
        Some(k) => inst.with_k_select(k)?,
        None => inst,
    };
    Ok((input, inst))
}

pub fn solve(args: &SolveArgs) -> Result<Output> {
    let (input, inst) = load_instance(&args.problem, args.anneal.k)?;
    let ranking = initial_ranking(&args.source, &inst)?;
    let d = SaParams::default();
    let params = SaParams {
        t_init: args.t_init.unwrap_or(d.t_init),
        alpha: args.alpha.unwrap_or(d.alpha),
        markov_len: args.markov.unwrap_or(d.markov_len),
        t_min: args.t_min.unwrap_or(d.t_min),
        max_iters: args.max_iters.unwrap_or(d.max_iters),
        stagnation_limit: args.stagnation.unwrap_or(d.stagnation_limit),
        seed: args.anneal.seed,
    };
    params.validate()?;
    let mode = args.anneal.objective;

    let mut fields = vec![format!("seed={}", params.seed)];
    if !args.no_anneal {
        fields.extend([
            format!("t_init={}", params.t_init),
            format!("alpha={}", params.alpha),
            format!("markov_len={}", params.markov_len),
            format!("t_min={}", params.t_min),
            format!("max_iters={}", params.max_iters),
            format!("stagnation={}", params.stagnation_limit),
        ]);
    }
    fields.extend([format!("objective={mode}"), format!("k={}", inst.k_select()), input.provenance("problem")]);
    fields.extend(ranking.provenance.iter().cloned());
    let mut report = Report::new(header("solve", &fields));
    for t in ranking.tables {
        report.table(t);
    }
    for w in ranking.warnings {
        report.warn(w);
    }

    let initial = evaluate(&inst, &ranking.ranks, mode).context("initial ranking is infeasible")?;
    describe_plan(&mut report, "initial", &inst, &initial);
    let mut files = Vec::new();
    let final_solution = if args.no_anneal {
        initial.clone()
    } else {
        let outcome = anneal::solve(&inst, &ranking.ranks, &params, mode)?;
        describe_plan(&mut report, "annealed", &inst, &outcome.best);
        let saved = initial.breakdown.total - outcome.best.breakdown.total;
        let pct = 100.0 * saved.paise() as f64 / initial.breakdown.total.paise() as f64;
        report.line(format!("improvement over initial ranking: {} ({pct:.2}%)", saved.grouped()));
        report.line(format!(
            "moves evaluated: {}, temperature levels: {}",
            outcome.trace.iterations,
            outcome.trace.iterations.div_ceil(params.markov_len)
        ));
        files.push(("trace.csv".to_string(), outcome.trace.to_csv()));
        outcome.best
    };
    offset_note(&mut report);
    debug_assert!(check_feasible(&inst, &final_solution.plan).is_ok());
    files.push(("plan.csv".to_string(), plan_table("plan", &inst, &final_solution).to_csv()));
    files.push(("costs.csv".to_string(), breakdown_table("costs", &final_solution.breakdown).to_csv()));
    Ok(Output { status: ranking.status, ..Output::new(report, files) })
}

// ---------------------------------------------------------------- brute

pub fn brute(problem: &Path, k: Option<usize>) -> Result<Output> {
    let (input, inst) = load_instance(problem, k)?;
    let k = inst.k_select();
    let result = anneal::brute_force(&inst, k)?;
    let mut report = Report::new(header("brute", &[format!("k={k}"), input.provenance("problem")]));
    report.line(format!(
        "ordered selections enumerated: {}, feasible: {}",
        result.enumerated, result.feasible
    ));
    let best = Solution {
        ranks: result.ranks.clone(),
        plan: result.plan.clone(),
        breakdown: result.breakdown.clone(),
        score: 0.0,
    };
    let selected: Vec<&str> = result.ranks.order()[..k].iter().map(|&s| inst.suppliers()[s].id.as_str()).collect();
    report.line(format!("optimal selection: {}", selected.join(" > ")));
    report.table(plan_table("optimal order plan", &inst, &best));
    report.table(breakdown_table("optimal cost breakdown", &best.breakdown));
    offset_note(&mut report);
    let files = vec![
        ("plan.csv".to_string(), plan_table("plan", &inst, &best).to_csv()),
        ("costs.csv".to_string(), breakdown_table("costs", &best.breakdown).to_csv()),
    ];
    Ok(Output::new(report, files))
}

// ---------------------------------------------------------------- tune

fn design_table(design: &L9Design, responses: &[Vec<f64>], a: &TuningAnalysis) -> Table {
    let replicates = responses[0].len();
    let mut headers: Vec<String> = ["experiment", "t_init", "alpha", "markov_len"].map(String::from).to_vec();
    if replicates == 1 {
        headers.push("response".into());
    } else {
        headers.extend((1..=replicates).map(|r| format!("response_{r}")));
        headers.push("mean".into());
    }
    headers.push("sn_ratio_db".into());
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut t = Table::new("L9 design and responses", &header_refs);
    for (row, levels) in design.rows.iter().enumerate() {
        let mut cells: Vec<Cell> = vec![(row + 1).into()];
        cells.extend((0..3).map(|f| Cell::text(design.levels.value_label(f, levels[f]))));
        cells.extend(responses[row].iter().map(|&y| Cell::num(y, 6)));
        if replicates > 1 {
            cells.push(Cell::num(a.run_means[row], 6));
        }
        cells.push(Cell::num(a.sn_ratios[row], 4));
        t.push(cells);
    }
    t
}

fn anova_table(a: &TuningAnalysis) -> Table {
    let mut t = Table::new("ANOVA on run means", &["source", "df", "ss", "ms", "f", "p"]);
    for r in a.anova.factors.iter().chain([&a.anova.residual, &a.anova.total]) {
        t.push(vec![
            r.source.clone().into(),
            r.df.into(),
            Cell::num(r.ss, 6),
            Cell::num(r.ms, 6),
            Cell::opt(r.f_ratio, 3),
            Cell::opt(r.p_value, 4),
        ]);
    }
    t
}

fn response_table(a: &TuningAnalysis, levels: &FactorLevels) -> Table {
    let mut t =
        Table::new("Response table (level means)", &["factor", "level_1", "level_2", "level_3", "delta", "rank", "best"]);
    for (f, r) in a.response_table.factors.iter().enumerate() {
        let mut cells = vec![Cell::text(r.factor.clone())];
        cells.extend(r.level_means.iter().map(|&m| Cell::num(m, 6)));
        cells.extend([Cell::num(r.delta, 6), r.rank.into(), Cell::text(levels.value_label(f, r.best_level))]);
        t.push(cells);
    }
    t
}

fn main_effects_table(design: &L9Design, a: &TuningAnalysis) -> Result<Table> {
    let sn = taguchi::response_table(design, &a.sn_ratios)?;
    let mut t = Table::new("Main effects", &["factor", "level", "value", "mean_response", "mean_sn_db"]);
    for (f, (means, sn)) in a.response_table.factors.iter().zip(&sn.factors).enumerate() {
        for level in 0..3 {
            t.push(vec![
                FACTOR_NAMES[f].into(),
                (level + 1).into(),
                Cell::text(design.levels.value_label(f, level)),
                Cell::num(means.level_means[level], 6),
                Cell::num(sn.level_means[level], 4),
            ]);
        }
    }
    Ok(t)
}

pub fn tune(args: &TuneArgs) -> Result<Output> {
    let mut fields = Vec::new();
    let levels = match &args.levels {
        Some(path) => {
            let (input, levels) = inputs::levels(path)?;
            fields.push(input.provenance("levels"));
            levels
        }
        None => FactorLevels::default(),
    };
    let design = build_l9(levels.clone())?;
    let mut status = 0;
    let mut warnings = Vec::new();

    let responses = if let Some(path) = &args.responses {
        let (input, matrix) = inputs::responses(path, &design)?;
        fields.push(input.provenance("responses"));
        matrix
    } else {
        let problem = args.problem.as_deref().context("--problem is required for live runs")?;
        let (input, inst) = load_instance(problem, args.anneal.k)?;
        let ranking = initial_ranking(&args.source, &inst)?;
        status = ranking.status;
        warnings = ranking.warnings;
        let replicates = args.replicates.unwrap_or(1);
        let mode = args.anneal.objective;
        fields.extend([
            format!("seed={}", args.anneal.seed),
            format!("replicates={replicates}"),
            format!("objective={mode}"),
            format!("k={}", inst.k_select()),
            input.provenance("problem"),
        ]);
        fields.extend(ranking.provenance);
        taguchi::run_experiments(
            &inst,
            &ranking.ranks,
            &design,
            &SaParams::default(),
            mode,
            replicates,
            args.anneal.seed,
        )?
    };

    let analysis = taguchi::analyze(&design, &responses)?;
    let mut report = Report::new(header("tune", &fields));
    let tables = [
        ("design.csv", design_table(&design, &responses, &analysis)),
        ("anova.csv", anova_table(&analysis)),
        ("response_table.csv", response_table(&analysis, &levels)),
        ("main_effects.csv", main_effects_table(&design, &analysis)?),
    ];
    let files = tables.iter().map(|(name, t)| (name.to_string(), t.to_csv())).collect();
    for (_, t) in tables {
        report.table(t);
    }
    let (t, a, m) = analysis.recommended;
    report.line(format!("recommended: t_init={t} alpha={a} markov_len={m}"));
    if analysis.anova.factors.iter().all(|r| r.f_ratio.is_none()) {
        report.line("note: residual sum of squares is zero, so F ratios and p-values are not defined");
    }
    for w in warnings {
        report.warn(w);
    }
    Ok(Output { status, ..Output::new(report, files) })
}
