use super::{PerResource, Resource};
use crate::num::Scalar;
use serde::{Deserialize, Serialize};

/// Cost of one unit (or one kWh of storage) over each life stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsystemCost<T> {
    pub precommissioning: T,
    pub capital: T,
    /// Per year.
    pub om_per_year: T,
    pub decommissioning: T,
}

impl<T: Scalar> SubsystemCost<T> {
    pub fn new(
        precommissioning: f64,
        capital: f64,
        om_per_year: f64,
        decommissioning: f64,
    ) -> Self {
        Self {
            precommissioning: T::lit(precommissioning),
            capital: T::lit(capital),
            om_per_year: T::lit(om_per_year),
            decommissioning: T::lit(decommissioning),
        }
    }

    pub fn is_valid(&self) -> bool {
        [
            self.precommissioning,
            self.capital,
            self.om_per_year,
            self.decommissioning,
        ]
        .iter()
        .all(|v| v.is_finite() && *v >= T::zero())
    }

    pub fn scaled(&self, k: T) -> Self {
        Self {
            precommissioning: self.precommissioning * k,
            capital: self.capital * k,
            om_per_year: self.om_per_year * k,
            decommissioning: self.decommissioning * k,
        }
    }
}

/// Lifetime cost of `quantity` units: pre-commissioning, capital, yearly O&M over the lifetime and
/// decommissioning. `degradation`, when given, inflates the capital term by `1 + δ·lifetime`
/// (storage only).
pub fn subsystem_lifetime_cost<T: Scalar>(
    quantity: T,
    sub: &SubsystemCost<T>,
    lifetime: T,
    degradation: Option<T>,
) -> T {
    let capital = match degradation {
        Some(delta) => sub.capital * (T::one() + delta * lifetime),
        None => sub.capital,
    };
    quantity * (sub.precommissioning + capital + sub.om_per_year * lifetime + sub.decommissioning)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBook<T> {
    pub wec: SubsystemCost<T>,
    pub tec: SubsystemCost<T>,
    pub owt: SubsystemCost<T>,
    pub fpv: SubsystemCost<T>,
    /// Per kWh of capacity.
    pub bess: SubsystemCost<T>,
    /// Fraction per year.
    pub bess_degradation: T,
    /// Years.
    pub lifetime: T,
}

impl<T: Scalar> CostBook<T> {
    /// Published unit costs for 750 kW WEC, 500 kW TEC, 8 MW OWT, 0.4 kW FPV and per-kWh BESS,
    /// a 20-year lifetime and a 4.85 %/yr degradation factor.
    pub fn table1() -> Self {
        Self {
            wec: SubsystemCost::new(126_000.0, 6_300_000.0, 272_000.0, 1_000_000.0),
            tec: SubsystemCost::new(126_000.0, 6_598_500.0, 259_047.0, 0.0),
            owt: SubsystemCost::new(367_200.0, 16_038_767.0, 259_047.0, 1_123_333.0),
            fpv: SubsystemCost::new(132.0, 520.0, 18.0, 35.0),
            bess: SubsystemCost::new(310.0, 150.0, 10.0, 100.0),
            bess_degradation: T::lit(0.0485),
            lifetime: T::lit(20.0),
        }
    }

    pub fn subsystem(&self, r: Resource) -> &SubsystemCost<T> {
        match r {
            Resource::Wec => &self.wec,
            Resource::Tec => &self.tec,
            Resource::Owt => &self.owt,
            Resource::Fpv => &self.fpv,
        }
    }

    /// Lifetime cost of one generator unit.
    pub fn unit_cost(&self, r: Resource) -> T {
        subsystem_lifetime_cost(T::one(), self.subsystem(r), self.lifetime, None)
    }

    /// Lifetime cost of one kWh of storage capacity.
    pub fn bess_unit_cost(&self) -> T {
        subsystem_lifetime_cost(
            T::one(),
            &self.bess,
            self.lifetime,
            Some(self.bess_degradation),
        )
    }

    /// Every monetary entry multiplied by `k`; lifetime and degradation unchanged.
    pub fn scaled(&self, k: T) -> Self {
        Self {
            wec: self.wec.scaled(k),
            tec: self.tec.scaled(k),
            owt: self.owt.scaled(k),
            fpv: self.fpv.scaled(k),
            bess: self.bess.scaled(k),
            ..self.clone()
        }
    }

    pub fn is_valid(&self) -> bool {
        [&self.wec, &self.tec, &self.owt, &self.fpv, &self.bess]
            .iter()
            .all(|c| c.is_valid())
            && self.lifetime > T::zero()
            && self.lifetime.is_finite()
            && self.bess_degradation >= T::zero()
            && self.bess_degradation.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown<T> {
    pub wec: T,
    pub tec: T,
    pub owt: T,
    pub fpv: T,
    pub bess: T,
    pub total: T,
}

/// Per-subsystem lifetime costs for a build-out; `total` sums them in a fixed order.
pub fn cost_breakdown<T: Scalar>(
    book: &CostBook<T>,
    counts: &PerResource<u64>,
    e_bess: T,
) -> CostBreakdown<T> {
    let count = |r: Resource| T::from_u64(*counts.get(r)).expect("count representable");
    let gen =
        |r: Resource| subsystem_lifetime_cost(count(r), book.subsystem(r), book.lifetime, None);
    let wec = gen(Resource::Wec);
    let tec = gen(Resource::Tec);
    let owt = gen(Resource::Owt);
    let fpv = gen(Resource::Fpv);
    let bess = subsystem_lifetime_cost(
        e_bess,
        &book.bess,
        book.lifetime,
        Some(book.bess_degradation),
    );
    CostBreakdown {
        wec,
        tec,
        owt,
        fpv,
        bess,
        total: wec + tec + owt + fpv + bess,
    }
}
