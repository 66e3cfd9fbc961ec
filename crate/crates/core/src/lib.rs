//! Capacity sizing for offshore hybrid renewable microgrids.
//!
//! The pipeline runs from raw met-ocean datasets ([`ingest`]) through per-unit power models
//! ([`projection`]) to a mixed-integer sizing problem ([`model`]) solved exactly by the built-in
//! simplex and branch-and-bound ([`solver`]). The numeric core is generic over [`num::Scalar`]
//! (`f32` or `f64`); the aliases below fix it to `f64`.

pub mod ingest;
pub mod model;
pub mod num;
pub mod presets;
pub mod projection;
pub mod solver;

pub use num::Scalar;

pub type Problem = model::MilpProblem<f64>;
pub type Scenario = model::SizingScenario<f64>;
pub type Solution = model::SizingSolution<f64>;
pub type Costs = model::CostBook<f64>;
pub type Bess = model::BessParams<f64>;
pub type Options = solver::SolverOptions<f64>;
pub type Specs = projection::ProjectionSpecs<f64>;
