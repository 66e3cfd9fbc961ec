//! Command-line front end: build profiles from raw datasets, size a scenario, check a solution
//! document, and compare branch-and-bound with exhaustive enumeration.

pub mod report;
pub mod scenario;

use clap::{Args, Parser, Subcommand};
use offshore_sizing::model::{
    assemble_milp, validate_solution, Resource, SizingSolution, ValidationTolerance,
};
use offshore_sizing::num::rel_diff;
use offshore_sizing::solver::{brute_force_oracle, solve_milp, MilpStatus, SolverError};
use offshore_sizing::{Scenario, Solution};
pub use report::{Format, Report};
pub use scenario::{LoadedScenario, ScenarioFile, BUILTIN_DEFAULT};
use serde::Serialize;
use std::fmt::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("validation failed:\n{0}")]
    Validation(String),
    #[error("{0}")]
    Limit(String),
    #[error("solver error: {0}")]
    Solver(#[from] SolverError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Data(_) | CliError::Io(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Limit(_) => 4,
            CliError::Solver(SolverError::BudgetExceeded { .. })
            | CliError::Solver(SolverError::IterationLimit(_)) => 4,
            CliError::Solver(SolverError::Model(_))
            | CliError::Solver(SolverError::UnboundedInteger(_)) => 1,
            CliError::Solver(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "offshore-sizing",
    version,
    about = "Size offshore hybrid renewable microgrids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build per-unit typical-day profiles from the scenario's raw datasets.
    Profiles(CommonArgs),
    /// Assemble, solve and validate the sizing problem.
    Solve(CommonArgs),
    /// Validate a solution document against a scenario.
    Check {
        #[command(flatten)]
        common: CommonArgs,
        /// Solution document written by `solve --out`.
        #[arg(long)]
        solution: PathBuf,
    },
    /// Compare branch-and-bound with exhaustive enumeration.
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        /// Maximum number of integral combinations to enumerate.
        #[arg(long)]
        budget: Option<u128>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario JSON path, or `table1_defaults`.
    #[arg(long)]
    pub scenario: String,
    /// Output document path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative optimality gap.
    #[arg(long)]
    pub gap: Option<f64>,
    #[arg(long)]
    pub node_limit: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Runs one parsed command and returns what it prints on success.
pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Profiles(args) => cmd_profiles(&args),
        Command::Solve(args) => cmd_solve(&args).map(|out| out.rendered),
        Command::Check { common, solution } => cmd_check(&common, &solution),
        Command::Oracle { common, budget } => cmd_oracle(&common, budget),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}

fn options_for(
    loaded: &LoadedScenario,
    args: &CommonArgs,
) -> Result<offshore_sizing::Options, CliError> {
    let mut opts = loaded.options()?;
    if let Some(g) = args.gap {
        if !(g > 0.0 && g.is_finite()) {
            return Err(CliError::Config("--gap must be positive".into()));
        }
        opts.gap = g;
    }
    if let Some(n) = args.node_limit {
        opts.node_limit = n;
    }
    Ok(opts)
}

pub fn cmd_profiles(args: &CommonArgs) -> Result<String, CliError> {
    let loaded = LoadedScenario::load(&args.scenario)?;
    let doc = loaded.build_profiles()?;
    let json = doc.to_json();
    if let Some(out) = &args.out {
        write_file(out, &json)?;
    }
    Ok(match args.format {
        Format::Json => json,
        Format::Csv => {
            let keys: Vec<&String> = doc.0.keys().collect();
            let mut out = String::from("hour");
            for k in &keys {
                let _ = write!(out, ",{k}");
            }
            out.push('\n');
            for h in 0..24 {
                let _ = write!(out, "{h}");
                for k in &keys {
                    let _ = write!(out, ",{}", doc.0[*k].hours[h]);
                }
                out.push('\n');
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (k, entry) in &doc.0 {
                let n = entry.hours.len().max(1) as f64;
                let mean = entry.hours.iter().sum::<f64>() / n;
                let min = entry.hours.iter().copied().fold(f64::INFINITY, f64::min);
                let max = entry
                    .hours
                    .iter()
                    .copied()
                    .fold(f64::NEG_INFINITY, f64::max);
                let samples: u64 = entry.samples.iter().sum();
                let _ = writeln!(
                    out,
                    "{k:<5} mean {mean:>12.3} kW  min {min:>12.3}  max {max:>12.3}  samples {samples}"
                );
            }
            out
        }
    })
}

/// Everything `solve` produces.
#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub scenario: Scenario,
    pub solution: Solution,
    pub report: Report,
    /// Pretty JSON of the solution document.
    pub document: String,
    pub rendered: String,
}

/// Hours where even every unit at its bound (plus full discharge) cannot meet the load.
fn unreachable_hours(s: &Scenario) -> Vec<usize> {
    (0..s.horizon())
        .filter(|&t| {
            let gen: f64 = Resource::ALL
                .iter()
                .map(|&r| *s.count_upper_bounds.get(r) as f64 * s.generation.get(r)[t])
                .sum();
            let storage = if s.storage_enabled {
                s.bess.p_max_discharge
            } else {
                0.0
            };
            gen + storage < s.load[t]
        })
        .collect()
}

fn infeasibility_message(s: &Scenario) -> String {
    let hours = unreachable_hours(s);
    if !hours.is_empty() {
        return format!(
            "load exceeds the maximum possible supply at the count bounds in hour(s) {hours:?}"
        );
    }
    let mut msg = String::from("no build-out within the count bounds balances every hour");
    if !s.curtailment_enabled {
        msg.push_str(" (curtailment is disabled, so surplus output cannot be discarded)");
    }
    if !s.storage_enabled {
        msg.push_str(" (storage is disabled)");
    }
    msg
}

pub fn cmd_solve(args: &CommonArgs) -> Result<SolveOutput, CliError> {
    let loaded = LoadedScenario::load(&args.scenario)?;
    let scenario = loaded.scenario()?;
    let options = options_for(&loaded, args)?;
    let problem = assemble_milp(&scenario).map_err(|e| CliError::Config(e.to_string()))?;
    let result = solve_milp(&problem, &options)?;
    let diagnostics = result.diagnostics();
    let Some(x) = &result.x else {
        return Err(match result.status {
            MilpStatus::Infeasible => CliError::Infeasible(infeasibility_message(&scenario)),
            MilpStatus::Unbounded => CliError::Config("relaxation is unbounded".into()),
            status => CliError::Limit(format!(
                "{status:?} reached before any feasible build-out was found"
            )),
        });
    };
    let solution = SizingSolution::from_assignment(&scenario, &problem, x, diagnostics)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let tol = ValidationTolerance::default();
    let validation = validate_solution(&scenario, &solution);
    if !validation.passes(&tol) {
        return Err(CliError::Validation(report::describe_validation(
            &validation,
            &tol,
        )));
    }
    let document = solution.to_json() + "\n";
    if let Some(out) = &args.out {
        write_file(out, &document)?;
    }
    let report = Report::new(&loaded.region(), &scenario, &solution, &validation);
    if matches!(result.status, MilpStatus::NodeLimit | MilpStatus::TimeLimit) {
        return Err(CliError::Limit(format!(
            "{:?} reached: best build-out costs {:.2} with relative gap {:.3e}\n{}",
            result.status,
            solution.objective,
            solution.diagnostics.gap,
            report.to_text()
        )));
    }
    let rendered = report.render(args.format);
    Ok(SolveOutput {
        scenario,
        solution,
        report,
        document,
        rendered,
    })
}

pub fn cmd_check(args: &CommonArgs, solution_path: &Path) -> Result<String, CliError> {
    let loaded = LoadedScenario::load(&args.scenario)?;
    let scenario = loaded.scenario()?;
    let text = std::fs::read_to_string(solution_path)
        .map_err(|e| CliError::Config(format!("{}: {e}", solution_path.display())))?;
    let solution: Solution = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", solution_path.display())))?;
    let tol = ValidationTolerance::default();
    let validation = validate_solution(&scenario, &solution);
    let rendered = match args.format {
        Format::Json => {
            serde_json::to_string_pretty(&validation).expect("report serializes") + "\n"
        }
        _ => report::describe_validation(&validation, &tol),
    };
    if validation.passes(&tol) {
        Ok(rendered)
    } else {
        Err(CliError::Validation(rendered))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleComparison {
    pub branch_and_bound: Option<f64>,
    pub oracle: Option<f64>,
    pub relative_difference: Option<f64>,
    pub nodes: usize,
    pub combinations: u128,
    pub lp_solves: usize,
    pub agree: bool,
}

pub fn cmd_oracle(args: &CommonArgs, budget: Option<u128>) -> Result<String, CliError> {
    let loaded = LoadedScenario::load(&args.scenario)?;
    let scenario = loaded.scenario()?;
    let options = options_for(&loaded, args)?;
    let problem = assemble_milp(&scenario).map_err(|e| CliError::Config(e.to_string()))?;
    let budget = budget.unwrap_or_else(|| loaded.budget());
    let oracle = brute_force_oracle(&problem, budget, &options)?;
    let bnb = solve_milp(&problem, &options)?;

    let value = |status: MilpStatus, obj: f64| (status == MilpStatus::Optimal).then_some(obj);
    let b = value(bnb.status, bnb.objective);
    let o = value(oracle.status, oracle.objective);
    let diff = match (b, o) {
        (Some(b), Some(o)) => Some(rel_diff(b, o)),
        _ => None,
    };
    let agree = match diff {
        Some(d) => d <= 1e-6,
        None => bnb.status == oracle.status,
    };
    let cmp = OracleComparison {
        branch_and_bound: b,
        oracle: o,
        relative_difference: diff,
        nodes: bnb.nodes,
        combinations: oracle.combinations,
        lp_solves: oracle.lp_solves,
        agree,
    };
    let rendered = match args.format {
        Format::Json => serde_json::to_string_pretty(&cmp).expect("comparison serializes") + "\n",
        _ => {
            let show = |v: Option<f64>, status: MilpStatus| match v {
                Some(v) => format!("{v:.6}"),
                None => format!("{status:?}").to_lowercase(),
            };
            let mut out = String::new();
            let _ = writeln!(
                out,
                "branch-and-bound: {} ({} nodes)",
                show(b, bnb.status),
                bnb.nodes
            );
            let _ = writeln!(
                out,
                "oracle:           {} ({} combinations, {} LP solves)",
                show(o, oracle.status),
                oracle.combinations,
                oracle.lp_solves
            );
            match diff {
                Some(d) => {
                    let _ = writeln!(out, "relative difference: {d:.3e}");
                }
                None => {
                    let _ = writeln!(out, "relative difference: n/a");
                }
            }
            out
        }
    };
    if agree {
        Ok(rendered)
    } else {
        Err(CliError::Validation(rendered))
    }
}
