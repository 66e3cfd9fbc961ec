//! Exact solution of [`MilpProblem`]s: a dense two-phase simplex for relaxations, best-bound
//! branch-and-bound for integrality, and an exhaustive enumerator used as an oracle on small
//! instances.
//!
//! Everything here is deterministic: identical inputs produce bit-identical outputs, unless a
//! wall-clock time limit is configured and hit.

mod branch;
mod oracle;
mod simplex;

pub use branch::{solve_milp, MilpSolution, MilpStatus, NodeRecord};
pub use oracle::{brute_force_oracle, OracleSolution, DEFAULT_ENUMERATION_BUDGET};
pub use simplex::{solve_lp, solve_lp_with_bounds, LpSolution, LpStatus};

use crate::model::{assemble_milp, MilpProblem, ModelError, SizingScenario, SizingSolution};
use crate::num::Scalar;
use serde::{Deserialize, Serialize};
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("pivot element {value:e} below tolerance at row {row}, column {column}")]
    PivotTolerance {
        row: usize,
        column: usize,
        value: f64,
    },
    #[error("simplex exceeded {0} pivots")]
    IterationLimit(usize),
    #[error("lost feasibility after pivoting: residual {0:e}")]
    NumericalTrouble(f64),
    #[error("integer column {0} has an infinite bound")]
    UnboundedInteger(String),
    #[error("enumeration needs {required} combinations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub type Result<T> = std::result::Result<T, SolverError>;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions<T> {
    /// Allowed row and bound violation of a basic solution (rows are equilibrated first).
    pub feasibility_tol: T,
    /// Distance from an integer below which a value counts as integral.
    pub integrality_tol: T,
    /// Relative optimality gap at which branch-and-bound stops.
    pub gap: T,
    /// Smallest pivot magnitude accepted by the ratio test.
    pub pivot_tol: T,
    /// Reduced-cost threshold on the normalised objective.
    pub optimality_tol: T,
    pub node_limit: usize,
    pub time_limit: Option<Duration>,
    /// Non-improving pivots tolerated before switching from Dantzig's to Bland's rule.
    pub bland_after: usize,
    pub max_pivots: usize,
    /// Try the rounded-up relaxation as a first incumbent.
    pub seed_incumbent: bool,
    /// Keep a record of every evaluated node.
    pub record_tree: bool,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        Self {
            feasibility_tol: T::lit(1e-7).max(eps * T::lit(1e3)),
            integrality_tol: T::lit(1e-6).max(eps * T::lit(1e3)),
            gap: T::lit(1e-6),
            pivot_tol: T::lit(1e-9).max(eps * T::lit(1e2)),
            optimality_tol: T::lit(1e-9).max(eps * T::lit(1e2)),
            node_limit: 200_000,
            time_limit: None,
            bland_after: 500,
            max_pivots: 100_000,
            seed_incumbent: true,
            record_tree: false,
        }
    }
}

/// Solver outcome attached to a sizing solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    pub status: MilpStatus,
    pub nodes: usize,
    pub lp_iterations: usize,
    pub gap: f64,
    pub best_bound: f64,
}

/// Result of sizing a scenario end to end.
#[derive(Debug, Clone, PartialEq)]
pub enum SizingOutcome<T> {
    Solved(SizingSolution<T>),
    Infeasible(SolverDiagnostics),
    /// A node or time limit stopped the search before any feasible build-out was found.
    NoIncumbent(SolverDiagnostics),
}

/// Assembles, solves and decodes a sizing scenario.
pub fn solve_sizing<T: Scalar>(
    scenario: &SizingScenario<T>,
    options: &SolverOptions<T>,
) -> Result<SizingOutcome<T>> {
    let problem = assemble_milp(scenario)?;
    let sol = solve_milp(&problem, options)?;
    let diagnostics = sol.diagnostics();
    Ok(match (&sol.x, sol.status) {
        (Some(x), _) => SizingOutcome::Solved(SizingSolution::from_assignment(
            scenario,
            &problem,
            x,
            diagnostics,
        )?),
        (None, MilpStatus::Infeasible) => SizingOutcome::Infeasible(diagnostics),
        (None, _) => SizingOutcome::NoIncumbent(diagnostics),
    })
}

/// Lower and upper bounds of `problem` with the integral columns fixed to `values`.
pub(crate) fn fixed_bounds<T: Scalar>(
    problem: &MilpProblem<T>,
    lower: &[T],
    upper: &[T],
    fixes: impl IntoIterator<Item = (usize, T)>,
) -> (Vec<T>, Vec<T>) {
    let mut lo = lower.to_vec();
    let mut hi = upper.to_vec();
    debug_assert_eq!(lo.len(), problem.num_columns());
    for (j, v) in fixes {
        lo[j] = v;
        hi[j] = v;
    }
    (lo, hi)
}
