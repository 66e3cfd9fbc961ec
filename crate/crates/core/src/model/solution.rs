use super::{
    assemble::column_names, cost_breakdown, MilpProblem, ModelError, PerResource, Resource, Result,
    SizingScenario,
};
use crate::num::Scalar;
use crate::solver::SolverDiagnostics;
use serde::{Deserialize, Serialize};

/// Storage state and flows for one hourly step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispatchStep<T> {
    /// kWh stored at the end of the step.
    pub energy: T,
    pub charge: T,
    pub discharge: T,
    pub curtail: T,
    pub charging: u8,
    pub discharging: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizingSolution<T> {
    pub counts: PerResource<u64>,
    /// kWh of storage capacity.
    pub e_bess: T,
    /// kWh stored at the start of the day.
    pub e_initial: T,
    pub schedule: Vec<DispatchStep<T>>,
    /// Lifetime cost recomputed from the counts and capacity.
    pub objective: T,
    pub diagnostics: SolverDiagnostics,
}

impl<T: Scalar> SizingSolution<T> {
    /// Reads a solver assignment back through the column names of an assembled problem.
    /// Integer columns are rounded and tiny negative flows clipped to zero.
    pub fn from_assignment(
        scenario: &SizingScenario<T>,
        problem: &MilpProblem<T>,
        x: &[T],
        diagnostics: SolverDiagnostics,
    ) -> Result<Self> {
        if x.len() != problem.num_columns() {
            return Err(ModelError::Assignment(format!(
                "{} values for {} columns",
                x.len(),
                problem.num_columns()
            )));
        }
        let value = |name: &str| -> Result<T> {
            problem
                .column(name)
                .map(|j| x[j].max(T::zero()))
                .ok_or_else(|| ModelError::Assignment(format!("no column {name}")))
        };
        let names = column_names();
        let mut counts = PerResource::default();
        for r in Resource::ALL {
            let v = value(names.count(r))?.round();
            *counts.get_mut(r) = v.to_u64().unwrap_or(0);
        }
        let e_bess = value(names.e_bess)?;
        let e_initial = value(names.e_initial)?;
        let binary = |v: T| u8::from(v.round() >= T::one());
        let schedule = (1..=scenario.horizon())
            .map(|t| {
                Ok(DispatchStep {
                    energy: value(&names.energy(t))?,
                    charge: value(&names.charge(t))?,
                    discharge: value(&names.discharge(t))?,
                    curtail: value(&names.curtail(t))?,
                    charging: binary(value(&names.charging(t))?),
                    discharging: binary(value(&names.discharging(t))?),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let objective = cost_breakdown(&scenario.costs, &counts, e_bess).total;
        Ok(Self {
            counts,
            e_bess,
            e_initial,
            schedule,
            objective,
            diagnostics,
        })
    }

    pub fn to_json(&self) -> String
    where
        T: Serialize,
    {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }
}
