use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::json;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn ssopt(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssopt"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SSOPT_SEED")
        .output()
        .expect("ssopt runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Rows of a CSV file keyed by column name.
fn read_csv(p: &Path) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::Reader::from_path(p).unwrap();
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| headers.iter().map(String::from).zip(rec.unwrap().iter().map(String::from)).collect())
        .collect()
}

fn write_json(dir: &Path, name: &str, v: &serde_json::Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn judgments_with_criteria(criteria_matrix: serde_json::Value) -> serde_json::Value {
    let mut j: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("judgments.json")).unwrap()).unwrap();
    j["criteria_matrix"] = criteria_matrix;
    j
}

/// Consistency ratio of a 3x3 matrix via plain power iteration.
fn oracle_cr3(a: [[f64; 3]; 3]) -> f64 {
    let mut v = [1.0 / 3.0; 3];
    for _ in 0..10_000 {
        let mut next = [0.0; 3];
        for i in 0..3 {
            next[i] = (0..3).map(|j| a[i][j] * v[j]).sum();
        }
        let s: f64 = next.iter().sum();
        v = next.map(|x| x / s);
    }
    let lambda = (0..3).map(|i| (0..3).map(|j| a[i][j] * v[j]).sum::<f64>() / v[i]).sum::<f64>() / 3.0;
    (lambda - 3.0) / 2.0 / 0.66
}

#[test]
fn rank_reproduces_composite_scores() {
    let dir = tempfile::tempdir().unwrap();
    let o = ssopt(dir.path(), &["rank", "--judgments", path(&fixture("judgments.json"))]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("# ssopt rank judgments=judgments.json@sha256:"), "{out}");
    let ranking = read_csv(&dir.path().join("ranking.csv"));
    let order: Vec<&str> = ranking.iter().map(|r| r["alternative"].as_str()).collect();
    assert_eq!(order, ["S4", "S1", "S2", "S3", "S5", "S6"]);
    for (row, want) in ranking.iter().zip([0.4099, 0.2733, 0.1319, 0.1026, 0.0496, 0.0315]) {
        let got: f64 = row["score"].parse().unwrap();
        assert!((got - want).abs() < 1e-3, "{row:?}");
    }
    let consistency = read_csv(&dir.path().join("consistency.csv"));
    assert!(consistency.iter().all(|r| r["status"] == "ok"));
}

#[test]
fn rank_all_ones_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let ones = |n: usize| json!(vec![vec![1; n]; n]);
    let j = json!({
        "criteria": ["a", "b", "c"],
        "criteria_matrix": ones(3),
        "alternatives": ["x", "y", "z", "w"],
        "alternative_matrices": { "a": ones(4), "b": ones(4), "c": ones(4) }
    });
    let f = write_json(dir.path(), "ones.json", &j);
    let o = ssopt(dir.path(), &["rank", "--judgments", path(&f)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for row in read_csv(&dir.path().join("ranking.csv")) {
        assert!((row["score"].parse::<f64>().unwrap() - 0.25).abs() < 1e-12);
    }
    for row in read_csv(&dir.path().join("consistency.csv")) {
        assert!(row["CR"].parse::<f64>().unwrap().abs() < 1e-9);
    }
    // ties keep label order
    let order: Vec<String> = read_csv(&dir.path().join("ranking.csv")).into_iter().map(|r| r["alternative"].clone()).collect();
    assert_eq!(order, ["w", "x", "y", "z"]);
}

#[test]
fn inconsistent_criteria_warn_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // Cost vs Delivery moved from 1/9 to 1/2.
    let a = [[1.0, 0.2, 0.5], [5.0, 1.0, 1.0 / 3.0], [2.0, 3.0, 1.0]];
    let expected = oracle_cr3(a);
    assert!((0.2..0.4).contains(&expected), "{expected}");
    let j = judgments_with_criteria(json!([[1, "1/5", "1/2"], [5, 1, "1/3"], [2, 3, 1]]));
    let f = write_json(dir.path(), "bad.json", &j);
    let o = ssopt(dir.path(), &["rank", "--judgments", path(&f)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("matrix 'criteria'"), "{}", stderr(&o));
    assert!(stdout(&o).contains("Composite scores"));
    let rows = read_csv(&dir.path().join("consistency.csv"));
    let cr: f64 = rows[0]["CR"].parse().unwrap();
    assert!((cr - expected).abs() < 1e-6, "{cr} vs {expected}");
    assert_eq!(rows[0]["status"], "INCONSISTENT");

    // the warning status carries through to solve
    let o = ssopt(
        dir.path(),
        &["solve", "--problem", path(&fixture("firm600.json")), "--judgments", path(&f), "--no-anneal"],
    );
    assert_eq!(code(&o), 1);
}

#[test]
fn malformed_judgments_name_the_cell() {
    let dir = tempfile::tempdir().unwrap();
    let j = judgments_with_criteria(json!([[1, "1/5", "1/9"], [5, 1, "one third"], [9, 3, 1]]));
    let f = write_json(dir.path(), "typo.json", &j);
    let o = ssopt(dir.path(), &["rank", "--judgments", path(&f)]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("criteria") && err.contains("(1, 2)") && err.contains("one third"), "{err}");

    let j = judgments_with_criteria(json!([[1, "1/5", "1/9"], [5, 1, "1/3"], [9, 2, 1]]));
    let f = write_json(dir.path(), "nonreciprocal.json", &j);
    let o = ssopt(dir.path(), &["rank", "--judgments", path(&f)]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
}

fn plan_rows(dir: &Path) -> Vec<(String, String, String, String)> {
    read_csv(&dir.join("plan.csv"))
        .into_iter()
        .map(|r| (r["supplier"].clone(), r["quantity_t"].clone(), r["defective"].clone(), r["late_days"].clone()))
        .collect()
}

fn cost(dir: &Path, item: &str) -> String {
    read_csv(&dir.join("costs.csv")).into_iter().find(|r| r["item"] == item).unwrap()["amount"].clone()
}

fn owned(rows: &[(&str, &str, &str, &str)]) -> Vec<(String, String, String, String)> {
    rows.iter().map(|&(a, b, c, d)| (a.into(), b.into(), c.into(), d.into())).collect()
}

#[test]
fn no_anneal_reports_the_ahp_plan() {
    let dir = tempfile::tempdir().unwrap();
    let o = ssopt(
        dir.path(),
        &["solve", "--problem", path(&fixture("firm600.json")), "--judgments", path(&fixture("judgments.json")), "--no-anneal"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(plan_rows(dir.path()), owned(&[("v4", "200", "4", "3"), ("v1", "150", "5", "4"), ("v2", "250", "10", "8")]));
    assert_eq!(cost(dir.path(), "procurement cost"), "37312500");
    assert_eq!(cost(dir.path(), "quality cost"), "1750000");
    assert_eq!(cost(dir.path(), "delay cost"), "3750000");
    assert_eq!(cost(dir.path(), "total (component sum)"), "42812500");
    assert_eq!(cost(dir.path(), "tabulated total"), "43812500");
    assert!(!dir.path().join("trace.csv").exists());
    assert!(stdout(&o).contains("42,812,500"));
}

#[test]
fn default_solve_writes_trace_and_plan() {
    let dir = tempfile::tempdir().unwrap();
    let o = ssopt(dir.path(), &["solve", "--problem", path(&fixture("firm600.json")), "--ranks", "2,3,4,1,5,6"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.lines().next().unwrap().contains("seed=42 t_init=30 alpha=0.75 markov_len=20"), "{out}");
    assert!(out.contains("problem=firm600.json@sha256:"));
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("iter,temperature,current_score,best_score,accepted\n0,30,"), "{trace}");
    let best: Vec<f64> = read_csv(&dir.path().join("trace.csv")).iter().map(|r| r["best_score"].parse().unwrap()).collect();
    assert!(best.windows(2).all(|w| w[1] >= w[0]));
    let total: i64 = cost(dir.path(), "total (component sum)").parse().unwrap();
    assert!(total <= 42_812_500);
}

#[test]
fn csv_outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let problem = fixture("firm600.json");
    let args = ["solve", "--problem", path(&problem), "--ranks", "2,3,4,1,5,6", "--seed", "9"];
    let (oa, ob) = (ssopt(a.path(), &args), ssopt(b.path(), &args));
    assert_eq!(oa.stdout, ob.stdout);
    for f in ["trace.csv", "plan.csv", "costs.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }

    let tune = ["tune", "--problem", path(&problem), "--ranks", "2,3,4,1,5,6", "--replicates", "2", "--seed", "5"];
    let (ta, tb) = (ssopt(a.path(), &tune), ssopt(b.path(), &tune));
    assert_eq!(code(&ta), 0, "{}", stderr(&ta));
    assert_eq!(ta.stdout, tb.stdout);
    for f in ["design.csv", "anova.csv", "response_table.csv", "main_effects.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn seed_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ssopt"))
        .args(["solve", "--problem", path(&fixture("firm600.json")), "--ranks", "2,3,4,1,5,6", "--out", path(dir.path())])
        .env("SSOPT_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("# ssopt solve seed=7 "));
    let o = Command::new(env!("CARGO_BIN_EXE_ssopt"))
        .args(["solve", "--problem", path(&fixture("firm600.json")), "--ranks", "2,3,4,1,5,6", "--seed", "8"])
        .arg("--out")
        .arg(dir.path())
        .env("SSOPT_SEED", "7")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("# ssopt solve seed=8 "));
}

#[test]
fn infeasible_demand_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let mut p: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture("firm600.json")).unwrap()).unwrap();
    p["materials"][0]["demand_tons"] = json!(2000);
    let f = write_json(dir.path(), "big.json", &p);
    let o = ssopt(dir.path(), &["solve", "--problem", path(&f), "--ranks", "2,3,4,1,5,6"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("insufficient capacity") && err.contains("1350 t short"), "{err}");
}

#[test]
fn bad_arguments_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let problem = fixture("firm600.json");
    for args in [
        vec!["solve", "--problem", path(&problem), "--ranks", "1,1,2,3,4,5"],
        vec!["solve", "--problem", path(&problem), "--ranks", "1,2,3"],
        vec!["solve", "--problem", path(&problem), "--ranks", "1,2,3,4,5,6", "--judgments", path(&fixture("judgments.json"))],
        vec!["solve", "--problem", path(&problem), "--ranks", "1,2,3,4,5,6", "--alpha", "1.5"],
        vec!["solve", "--problem", path(&problem), "--ranks", "1,2,3,4,5,6", "--objective", "cheapest"],
        vec!["solve", "--problem", "/nonexistent/problem.json", "--ranks", "1,2,3,4,5,6"],
        vec!["brute", "--problem", path(&problem), "--k", "0"],
    ] {
        let o = ssopt(dir.path(), &args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn brute_reports_optimum_and_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = ssopt(dir.path(), &["brute", "--problem", path(&fixture("firm600.json")), "--k", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("ordered selections enumerated: 120"));
    assert_eq!(cost(dir.path(), "total (component sum)"), "42662500");

    let o = ssopt(dir.path(), &["brute", "--problem", path(&fixture("firm600.json")), "--k", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(plan_rows(dir.path())[0].0, "v5");
}

#[test]
fn brute_trivial_and_oversized_instances() {
    let dir = tempfile::tempdir().unwrap();
    let supplier = |id: String| json!({ "id": id, "capacity_tons": 100, "unit_cost_per_kg": 50, "defect_pct": 1, "delay_pct": 1 });
    let instance = |n: usize| {
        json!({
            "materials": [{ "id": "m", "demand_tons": 40 }],
            "suppliers": (0..n).map(|i| supplier(format!("s{i}"))).collect::<Vec<_>>(),
            "delay_cost_per_day": 1000,
            "k_select": 1
        })
    };
    let one = write_json(dir.path(), "one.json", &instance(1));
    let o = ssopt(dir.path(), &["brute", "--problem", path(&one)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(plan_rows(dir.path()), owned(&[("s0", "40", "0", "1")]));

    let eleven = write_json(dir.path(), "eleven.json", &instance(11));
    let o = ssopt(dir.path(), &["brute", "--problem", path(&eleven)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("at most 10"));
}

#[test]
fn tune_from_recorded_responses() {
    let dir = tempfile::tempdir().unwrap();
    let o = ssopt(dir.path(), &["tune", "--responses", path(&fixture("table9_responses.csv"))]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("recommended: t_init=30 alpha=0.75 markov_len=20"));
    let anova = read_csv(&dir.path().join("anova.csv"));
    let ss: Vec<f64> = anova.iter().map(|r| r["ss"].parse().unwrap()).collect();
    for (g, w) in ss.iter().zip([0.000301, 0.000222, 0.000078, 0.000875, 0.001475]) {
        assert!((g - w).abs() < 1e-6, "{ss:?}");
    }
    assert_eq!(anova[3]["f"], "NA");
    let ranks: Vec<String> = read_csv(&dir.path().join("response_table.csv")).into_iter().map(|r| r["rank"].clone()).collect();
    assert_eq!(ranks, ["1", "2", "3"]);
    assert_eq!(read_csv(&dir.path().join("main_effects.csv")).len(), 9);
    // the design file written by tune reads back as a responses file
    let o2 = ssopt(dir.path(), &["tune", "--responses", path(&dir.path().join("design.csv"))]);
    assert_eq!(code(&o2), 0, "{}", stderr(&o2));
    assert_eq!(
        stdout(&o).lines().skip(1).collect::<Vec<_>>(),
        stdout(&o2).lines().skip(1).collect::<Vec<_>>()
    );
}

#[test]
fn tune_rejects_bad_levels_and_responses() {
    let dir = tempfile::tempdir().unwrap();
    let levels = write_json(dir.path(), "levels.json", &json!({ "t_init": [10, 20], "alpha": [0.75, 0.85, 0.95], "markov_len": [20, 30, 40] }));
    let o = ssopt(dir.path(), &["tune", "--responses", path(&fixture("table9_responses.csv")), "--levels", path(&levels)]);
    assert_eq!(code(&o), 2);

    let levels = write_json(dir.path(), "alpha.json", &json!({ "t_init": [10, 20, 30], "alpha": [0.75, 0.85, 1.5], "markov_len": [20, 30, 40] }));
    let o = ssopt(dir.path(), &["tune", "--problem", path(&fixture("firm600.json")), "--levels", path(&levels)]);
    assert_eq!(code(&o), 2);

    let text = std::fs::read_to_string(fixture("table9_responses.csv")).unwrap();
    let truncated: String = text.lines().take(9).map(|l| format!("{l}\n")).collect();
    let f = dir.path().join("short.csv");
    std::fs::write(&f, truncated).unwrap();
    let o = ssopt(dir.path(), &["tune", "--responses", path(&f)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("experiment 9 is missing"), "{}", stderr(&o));

    let o = ssopt(dir.path(), &["tune"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn report_rerenders_the_last_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = ssopt(dir.path(), &["solve", "--problem", path(&fixture("firm600.json")), "--ranks", "2,3,4,1,5,6"]);
    let r = ssopt(dir.path(), &["report"]);
    assert_eq!(code(&r), 0);
    assert_eq!(r.stdout, o.stdout);
    let csv = ssopt(dir.path(), &["report", "--format", "csv"]);
    assert!(stdout(&csv).contains("item,amount\nprocurement cost,"));

    let empty = tempfile::tempdir().unwrap();
    assert_eq!(code(&ssopt(empty.path(), &["report"])), 2);
}
