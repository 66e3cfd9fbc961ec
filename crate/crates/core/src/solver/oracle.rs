//! Exhaustive enumeration of integral assignments, each completed by an LP over the continuous
//! columns. Exponential; intended for cross-checking branch-and-bound on small instances.

use super::simplex::{solve_lp_with_bounds, LpStatus};
use super::{fixed_bounds, MilpStatus, Result, SolverError, SolverOptions};
use crate::model::MilpProblem;
use crate::num::Scalar;

pub const DEFAULT_ENUMERATION_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution<T> {
    /// `Optimal`, `Infeasible` or `Unbounded`.
    pub status: MilpStatus,
    pub x: Option<Vec<T>>,
    /// NaN unless optimal.
    pub objective: T,
    /// Size of the enumerated integral lattice.
    pub combinations: u128,
    pub lp_solves: usize,
}

/// Enumerates every integral point inside the column bounds in lexicographic order and keeps the
/// first strictly best completion.
pub fn brute_force_oracle<T: Scalar>(
    problem: &MilpProblem<T>,
    budget: u128,
    options: &SolverOptions<T>,
) -> Result<OracleSolution<T>> {
    let integral: Vec<usize> = (0..problem.num_columns())
        .filter(|&j| problem.kinds()[j].is_integral())
        .collect();
    let mut ranges = Vec::with_capacity(integral.len());
    let mut required: u128 = 1;
    for &j in &integral {
        let (lo, hi) = (problem.lower()[j], problem.upper()[j]);
        if !lo.is_finite() || !hi.is_finite() {
            return Err(SolverError::UnboundedInteger(problem.names()[j].clone()));
        }
        let (lo, hi) = (lo.ceil(), hi.floor());
        let width = if hi < lo {
            0
        } else {
            (hi - lo).to_u128().unwrap_or(u128::MAX).saturating_add(1)
        };
        required = required.saturating_mul(width);
        ranges.push((lo, hi));
    }
    if required > budget {
        return Err(SolverError::BudgetExceeded { required, budget });
    }

    // Rows touching only integral columns can be checked without an LP.
    let is_integral = |j: usize| problem.kinds()[j].is_integral();
    let pure_rows: Vec<_> = problem
        .rows()
        .iter()
        .filter(|r| r.coeffs.iter().all(|&(j, _)| is_integral(j)))
        .collect();

    let mut result = OracleSolution {
        status: MilpStatus::Infeasible,
        x: None,
        objective: T::nan(),
        combinations: required,
        lp_solves: 0,
    };
    if required == 0 {
        return Ok(result);
    }

    let mut point: Vec<T> = problem.lower().to_vec();
    let mut current: Vec<T> = ranges.iter().map(|&(lo, _)| lo).collect();
    loop {
        for (k, &j) in integral.iter().enumerate() {
            point[j] = current[k];
        }
        let admissible = pure_rows
            .iter()
            .all(|r| r.violation(&point) <= options.feasibility_tol * T::one().max(r.rhs.abs()));
        if admissible {
            let fixes = integral.iter().copied().zip(current.iter().copied());
            let (lo, hi) = fixed_bounds(problem, problem.lower(), problem.upper(), fixes);
            let lp = solve_lp_with_bounds(problem, &lo, &hi, options)?;
            result.lp_solves += 1;
            match lp.status {
                LpStatus::Unbounded => {
                    result.status = MilpStatus::Unbounded;
                    result.x = None;
                    result.objective = T::neg_infinity();
                    return Ok(result);
                }
                LpStatus::Infeasible => {}
                LpStatus::Optimal => {
                    let mut x = lp.x;
                    for (k, &j) in integral.iter().enumerate() {
                        x[j] = current[k];
                    }
                    let obj = problem.objective_value(&x);
                    if result.x.is_none() || obj < result.objective {
                        result.status = MilpStatus::Optimal;
                        result.objective = obj;
                        result.x = Some(x);
                    }
                }
            }
        }

        // Odometer increment, last column fastest.
        let mut k = integral.len();
        loop {
            if k == 0 {
                return Ok(result);
            }
            k -= 1;
            if current[k] < ranges[k].1 {
                current[k] += T::one();
                break;
            }
            current[k] = ranges[k].0;
        }
    }
}
