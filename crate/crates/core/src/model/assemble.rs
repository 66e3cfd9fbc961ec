//! Assembly of the sizing MILP.
//!
//! Columns: four integer unit counts, the storage capacity and initial energy, then per step the
//! stored energy, charge, discharge and curtailment (continuous, >= 0), then per step the charge
//! and discharge status binaries. Steps are one hour, so kW and kWh exchange with factor one.
//!
//! Row families, per step `t` unless noted:
//!
//! | family       | constraint                                                        |
//! |--------------|-------------------------------------------------------------------|
//! | `balance`    | `Σ N_k·P_t^k + P_t^disc − P_t^char − P_t^curt = P_t^load`         |
//! | `energy`     | `E_t − E_{t−1} − η_c·P_t^char + P_t^disc/η_d = 0`, `E_0 = E_init` |
//! | `cyclic`     | `E_init − E_T = 0` (once)                                         |
//! | `soc_max`    | `E_t − SOC_max·E_bess <= 0`, also for `E_init`                    |
//! | `soc_min`    | `E_t − SOC_min·E_bess >= 0`, also for `E_init`                    |
//! | `exclusion`  | `U_t^char + U_t^disc <= 1`                                        |
//! | `disc_limit` | `P_t^disc − P_max^disc·U_t^disc <= 0`                             |
//! | `char_limit` | `P_t^char − P_max^char·U_t^char <= 0`                             |

use super::{MilpProblem, Relation, Resource, Result, SizingScenario, VarKind};
use crate::num::Scalar;

/// Column naming scheme shared by assembly and solution extraction. Steps are 1-based.
#[derive(Debug, Clone, Copy)]
pub struct ColumnNames {
    pub e_bess: &'static str,
    pub e_initial: &'static str,
}

pub fn column_names() -> ColumnNames {
    ColumnNames {
        e_bess: "e_bess",
        e_initial: "e_initial",
    }
}

impl ColumnNames {
    pub fn count(&self, r: Resource) -> &'static str {
        match r {
            Resource::Wec => "n_wec",
            Resource::Tec => "n_tec",
            Resource::Owt => "n_owt",
            Resource::Fpv => "n_fpv",
        }
    }

    pub fn energy(&self, t: usize) -> String {
        format!("e[{t}]")
    }

    pub fn charge(&self, t: usize) -> String {
        format!("p_char[{t}]")
    }

    pub fn discharge(&self, t: usize) -> String {
        format!("p_disc[{t}]")
    }

    pub fn curtail(&self, t: usize) -> String {
        format!("p_curt[{t}]")
    }

    pub fn charging(&self, t: usize) -> String {
        format!("u_char[{t}]")
    }

    pub fn discharging(&self, t: usize) -> String {
        format!("u_disc[{t}]")
    }
}

pub fn assemble_milp<T: Scalar>(scenario: &SizingScenario<T>) -> Result<MilpProblem<T>> {
    scenario.validate()?;
    let n = scenario.horizon();
    let names = column_names();
    let zero = T::zero();
    let inf = T::infinity();
    let mut p = MilpProblem::new();

    let count_cols = Resource::ALL
        .iter()
        .map(|&r| {
            let ub = T::from_u64(*scenario.count_upper_bounds.get(r)).unwrap_or(inf);
            p.add_column(
                names.count(r),
                VarKind::Integer,
                zero,
                ub,
                scenario.costs.unit_cost(r),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let storage_ub = if scenario.storage_enabled { inf } else { zero };
    let e_bess = p.add_column(
        names.e_bess,
        VarKind::Continuous,
        zero,
        storage_ub,
        scenario.costs.bess_unit_cost(),
    )?;
    let e_init = p.add_column(names.e_initial, VarKind::Continuous, zero, inf, zero)?;

    let mut steps = |name: fn(&ColumnNames, usize) -> String, kind, ub| {
        (1..=n)
            .map(|t| p.add_column(name(&names, t), kind, zero, ub, zero))
            .collect::<Result<Vec<_>>>()
    };
    let energy = steps(ColumnNames::energy, VarKind::Continuous, inf)?;
    let charge = steps(ColumnNames::charge, VarKind::Continuous, inf)?;
    let discharge = steps(ColumnNames::discharge, VarKind::Continuous, inf)?;
    let curtail_ub = if scenario.curtailment_enabled {
        inf
    } else {
        zero
    };
    let curtail = steps(ColumnNames::curtail, VarKind::Continuous, curtail_ub)?;
    let charging = steps(ColumnNames::charging, VarKind::Binary, T::one())?;
    let discharging = steps(ColumnNames::discharging, VarKind::Binary, T::one())?;

    let bess = &scenario.bess;
    let one = T::one();
    for t in 0..n {
        let mut coeffs: Vec<(usize, T)> = Resource::ALL
            .iter()
            .zip(&count_cols)
            .map(|(&r, &j)| (j, scenario.generation.get(r)[t]))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        coeffs.extend([(discharge[t], one), (charge[t], -one), (curtail[t], -one)]);
        p.add_row(
            format!("balance[{}]", t + 1),
            coeffs,
            Relation::Eq,
            scenario.load[t],
        )?;
    }
    for t in 0..n {
        let previous = if t == 0 { e_init } else { energy[t - 1] };
        p.add_row(
            format!("energy[{}]", t + 1),
            vec![
                (energy[t], one),
                (previous, -one),
                (charge[t], -bess.charge_efficiency),
                (discharge[t], one / bess.discharge_efficiency),
            ],
            Relation::Eq,
            zero,
        )?;
    }
    p.add_row(
        "cyclic",
        vec![(e_init, one), (energy[n - 1], -one)],
        Relation::Eq,
        zero,
    )?;
    for (t, &col) in std::iter::once(&e_init).chain(&energy).enumerate() {
        p.add_row(
            format!("soc_max[{t}]"),
            vec![(col, one), (e_bess, -bess.soc_max)],
            Relation::Le,
            zero,
        )?;
        p.add_row(
            format!("soc_min[{t}]"),
            vec![(col, one), (e_bess, -bess.soc_min)],
            Relation::Ge,
            zero,
        )?;
    }
    for t in 0..n {
        p.add_row(
            format!("exclusion[{}]", t + 1),
            vec![(charging[t], one), (discharging[t], one)],
            Relation::Le,
            one,
        )?;
    }
    for t in 0..n {
        p.add_row(
            format!("disc_limit[{}]", t + 1),
            vec![(discharge[t], one), (discharging[t], -bess.p_max_discharge)],
            Relation::Le,
            zero,
        )?;
    }
    for t in 0..n {
        p.add_row(
            format!("char_limit[{}]", t + 1),
            vec![(charge[t], one), (charging[t], -bess.p_max_charge)],
            Relation::Le,
            zero,
        )?;
    }
    Ok(p)
}
