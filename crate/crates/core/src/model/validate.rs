//! Solution checker that re-derives every constraint family directly from the scenario, without
//! going through the assembled matrix.

use super::{PerResource, Resource, SizingScenario, SizingSolution};
use crate::num::Scalar;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationTolerance {
    /// Relative violation allowed on each constraint row.
    pub constraint: f64,
    /// Relative discrepancy allowed between reported and recomputed objective.
    pub objective: f64,
}

impl Default for ValidationTolerance {
    fn default() -> Self {
        Self {
            constraint: 1e-6,
            objective: 1e-9,
        }
    }
}

/// Worst violation found in one constraint family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyViolation {
    pub family: &'static str,
    /// Violation divided by `max(1, largest term magnitude in the row)`.
    pub max_violation: f64,
    /// 1-based step of the worst row; `Some(0)` refers to the initial energy.
    pub worst_step: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub families: Vec<FamilyViolation>,
    pub objective_reported: f64,
    pub objective_recomputed: f64,
    /// `reported − recomputed`.
    pub objective_discrepancy: f64,
    pub objective_relative: f64,
}

impl ValidationReport {
    pub fn violations(&self, tol: &ValidationTolerance) -> Vec<&FamilyViolation> {
        self.families
            .iter()
            .filter(|f| f.max_violation > tol.constraint || f.max_violation.is_nan())
            .collect()
    }

    pub fn objective_ok(&self, tol: &ValidationTolerance) -> bool {
        self.objective_relative <= tol.objective
    }

    pub fn passes(&self, tol: &ValidationTolerance) -> bool {
        self.violations(tol).is_empty() && self.objective_ok(tol)
    }

    pub fn family(&self, name: &str) -> Option<&FamilyViolation> {
        self.families.iter().find(|f| f.family == name)
    }
}

struct Tracker {
    family: &'static str,
    worst: f64,
    step: Option<usize>,
}

impl Tracker {
    fn new(family: &'static str) -> Self {
        Self {
            family,
            worst: 0.0,
            step: None,
        }
    }

    /// Records `violation` relative to the magnitudes of the row's terms.
    fn record<T: Scalar>(&mut self, step: usize, violation: T, terms: &[T]) {
        let scale = terms
            .iter()
            .fold(T::one(), |acc, v| acc.max(v.abs()))
            .to_f64_lossy();
        let rel = violation.max(T::zero()).to_f64_lossy() / scale;
        if rel > self.worst || rel.is_nan() {
            self.worst = rel;
            self.step = Some(step);
        }
    }

    fn finish(self) -> FamilyViolation {
        FamilyViolation {
            family: self.family,
            max_violation: self.worst,
            worst_step: self.step,
        }
    }
}

/// Checks `solution` against every constraint family of `scenario` and recomputes the lifetime
/// cost. Violations are reported, never raised.
pub fn validate_solution<T: Scalar>(
    scenario: &SizingScenario<T>,
    solution: &SizingSolution<T>,
) -> ValidationReport {
    let n = scenario.horizon();
    let bess = &scenario.bess;
    let zero = T::zero();
    let one = T::one();

    let mut dims = Tracker::new("dimensions");
    let missing = T::from_usize(n.abs_diff(solution.schedule.len())).unwrap_or(one);
    dims.record(0, missing, &[]);

    let count = |r: Resource| T::from_u64(*solution.counts.get(r)).unwrap_or(T::infinity());
    let mut bounds = Tracker::new("bounds");
    for r in Resource::ALL {
        let ub = T::from_u64(*scenario.count_upper_bounds.get(r)).unwrap_or(T::infinity());
        bounds.record(0, count(r) - ub, &[ub]);
    }
    bounds.record(0, -solution.e_bess, &[]);
    bounds.record(0, -solution.e_initial, &[]);
    if !scenario.storage_enabled {
        bounds.record(0, solution.e_bess, &[]);
    }

    let mut balance = Tracker::new("balance");
    let mut energy = Tracker::new("energy");
    let mut soc = Tracker::new("soc_window");
    let mut exclusion = Tracker::new("exclusion");
    let mut disc_limit = Tracker::new("disc_limit");
    let mut char_limit = Tracker::new("char_limit");

    let mut soc_check = |step: usize, e: T| {
        let lo = bess.soc_min * solution.e_bess;
        let hi = bess.soc_max * solution.e_bess;
        soc.record(step, (lo - e).max(e - hi), &[e, lo, hi]);
    };
    soc_check(0, solution.e_initial);

    let mut previous = solution.e_initial;
    for (idx, s) in solution.schedule.iter().enumerate().take(n) {
        let t = idx + 1;
        for v in [s.energy, s.charge, s.discharge, s.curtail] {
            bounds.record(t, -v, &[]);
        }
        for b in [s.charging, s.discharging] {
            if b > 1 {
                bounds.record(t, T::from_u8(b - 1).unwrap_or(one), &[]);
            }
        }
        if !scenario.curtailment_enabled {
            bounds.record(t, s.curtail, &[]);
        }

        let mut terms: Vec<T> = Resource::ALL
            .iter()
            .map(|&r| count(r) * scenario.generation.get(r)[idx])
            .collect();
        terms.extend([s.discharge, -s.charge, -s.curtail]);
        let supply: T = terms.iter().copied().sum();
        terms.push(scenario.load[idx]);
        balance.record(t, (supply - scenario.load[idx]).abs(), &terms);

        let gain = bess.charge_efficiency * s.charge;
        let loss = s.discharge / bess.discharge_efficiency;
        energy.record(
            t,
            (s.energy - previous - gain + loss).abs(),
            &[s.energy, previous, gain, loss],
        );
        previous = s.energy;

        soc_check(t, s.energy);

        let uc = T::from_u8(s.charging).unwrap_or(zero);
        let ud = T::from_u8(s.discharging).unwrap_or(zero);
        exclusion.record(t, uc + ud - one, &[]);
        let cap_d = ud * bess.p_max_discharge;
        disc_limit.record(t, s.discharge - cap_d, &[s.discharge, cap_d]);
        let cap_c = uc * bess.p_max_charge;
        char_limit.record(t, s.charge - cap_c, &[s.charge, cap_c]);
    }

    let mut cyclic = Tracker::new("cyclic");
    if let Some(last) = solution.schedule.get(n.wrapping_sub(1)) {
        cyclic.record(
            n,
            (solution.e_initial - last.energy).abs(),
            &[solution.e_initial, last.energy],
        );
    }

    let recomputed = recompute_objective(scenario, &solution.counts, solution.e_bess);
    let reported = solution.objective.to_f64_lossy();
    let discrepancy = reported - recomputed;
    let denom = reported.abs().max(recomputed.abs()).max(1.0);

    ValidationReport {
        families: [
            dims, bounds, balance, energy, cyclic, soc, exclusion, disc_limit, char_limit,
        ]
        .into_iter()
        .map(Tracker::finish)
        .collect(),
        objective_reported: reported,
        objective_recomputed: recomputed,
        objective_discrepancy: discrepancy,
        objective_relative: discrepancy.abs() / denom,
    }
}

fn recompute_objective<T: Scalar>(
    scenario: &SizingScenario<T>,
    counts: &PerResource<u64>,
    e_bess: T,
) -> f64 {
    let c = &scenario.costs;
    let life = c.lifetime.to_f64_lossy();
    let per_unit = |s: &super::SubsystemCost<T>, capital_factor: f64| {
        s.precommissioning.to_f64_lossy()
            + s.capital.to_f64_lossy() * capital_factor
            + s.om_per_year.to_f64_lossy() * life
            + s.decommissioning.to_f64_lossy()
    };
    let generators: f64 = Resource::ALL
        .iter()
        .map(|&r| *counts.get(r) as f64 * per_unit(c.subsystem(r), 1.0))
        .sum();
    let degradation = 1.0 + c.bess_degradation.to_f64_lossy() * life;
    generators + e_bess.to_f64_lossy() * per_unit(&c.bess, degradation)
}
