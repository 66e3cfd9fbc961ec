//! The sizing model: lifetime cost accounting, the scenario statement, assembly into a
//! mixed-integer linear program and an independent solution checker.

mod assemble;
mod cost;
mod problem;
mod scenario;
mod solution;
mod validate;

pub use assemble::{assemble_milp, column_names};
pub use cost::{cost_breakdown, subsystem_lifetime_cost, CostBook, CostBreakdown, SubsystemCost};
pub use problem::{MilpProblem, Relation, Row, VarKind};
pub use scenario::{synthetic_platform_load, BessParams, PerResource, Resource, SizingScenario};
pub use solution::{DispatchStep, SizingSolution};
pub use validate::{validate_solution, FamilyViolation, ValidationReport, ValidationTolerance};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("problem construction: {0}")]
    Problem(String),
    #[error("assignment does not match the problem: {0}")]
    Assignment(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;
