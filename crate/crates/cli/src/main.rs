//! `ssopt`: supplier ranking, order optimization and annealer tuning.
//!
//! Exit status is 0 on success, 1 when the run succeeded but a judgment
//! matrix is too inconsistent to trust, and 2 on bad input or an infeasible
//! instance.

mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ssopt_core::procurement::ObjectiveMode;

use report::Format;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "ssopt", version, about = "Supplier ranking, order allocation and annealer tuning")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for CSV outputs and the saved report.
    #[arg(long, global = true, default_value = "ssopt-out")]
    out: PathBuf,

    /// How tables are printed on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive supplier weights and ranks from pairwise judgments.
    Rank {
        #[arg(long)]
        judgments: PathBuf,
    },
    /// Allocate orders from a ranking and improve the ranking by annealing.
    Solve(SolveArgs),
    /// Exhaustively search every ordered selection of k suppliers.
    Brute {
        #[arg(long)]
        problem: PathBuf,
        /// Suppliers to select (defaults to the problem file's k_select).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run or analyze the L9 experiment over annealing parameters.
    Tune(TuneArgs),
    /// Print the saved report of the last run in --out.
    Report,
}

#[derive(Debug, Args)]
#[group(id = "rank_source", multiple = false)]
pub struct RankSource {
    /// Judgments file; ranks come from the composite AHP scores.
    #[arg(long, group = "rank_source")]
    pub judgments: Option<PathBuf>,
    /// Explicit ranks per supplier in file order, e.g. 2,3,4,1,5,6.
    #[arg(long, value_delimiter = ',', group = "rank_source")]
    pub ranks: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct AnnealArgs {
    #[arg(long, env = "SSOPT_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_parser = parse_objective, default_value = "min-cost")]
    pub objective: ObjectiveMode,
    /// Suppliers to select (defaults to the problem file's k_select).
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: PathBuf,
    #[command(flatten)]
    pub source: RankSource,
    #[arg(long)]
    pub t_init: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Moves per temperature level.
    #[arg(long)]
    pub markov: Option<usize>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub stagnation: Option<usize>,
    /// Only evaluate the initial ranking.
    #[arg(long)]
    pub no_anneal: bool,
    #[command(flatten)]
    pub anneal: AnnealArgs,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[arg(long, required_unless_present = "responses")]
    pub problem: Option<PathBuf>,
    /// Factor levels (JSON); defaults to t_init 10/20/30, alpha 0.75/0.85/0.95, M 20/30/40.
    #[arg(long)]
    pub levels: Option<PathBuf>,
    /// Analyze recorded responses instead of running the annealer.
    #[arg(long, conflicts_with_all = ["replicates", "judgments", "ranks"])]
    pub responses: Option<PathBuf>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[command(flatten)]
    pub source: RankSource,
    #[command(flatten)]
    pub anneal: AnnealArgs,
}

fn parse_objective(s: &str) -> Result<ObjectiveMode, String> {
    s.parse().map_err(|e: ssopt_core::procurement::ModelError| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rank { judgments } => commands::rank(&judgments),
        Command::Solve(args) => commands::solve(&args),
        Command::Brute { problem, k } => commands::brute(&problem, k),
        Command::Tune(args) => commands::tune(&args),
        Command::Report => commands::load_report(&cli.out).map(|r| commands::Output::new(r, Vec::new())),
    };
    let output = match result {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    print!("{}", output.report.render(cli.format));
    for w in &output.report.warnings {
        eprintln!("warning: {w}");
    }
    if !output.files.is_empty() {
        if let Err(e) = commands::write_outputs(&cli.out, &output) {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(output.status)
}
