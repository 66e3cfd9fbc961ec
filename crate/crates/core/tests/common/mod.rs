#![allow(dead_code)]

use offshore_sizing::model::{
    BessParams, CostBook, PerResource, Resource, SizingScenario, SubsystemCost,
};
use proptest::collection::vec;
use proptest::prelude::*;

/// Parameters of a small random sizing scenario.
#[derive(Debug, Clone)]
pub struct Toy {
    pub load: Vec<f64>,
    pub generation: [Vec<f64>; 4],
    pub unit_costs: [f64; 4],
    pub bess_cost: f64,
    pub bounds: [u64; 4],
    pub efficiencies: (f64, f64),
    pub p_max: f64,
    pub storage: bool,
    pub curtailment: bool,
}

impl Toy {
    pub fn scenario(&self) -> SizingScenario<f64> {
        let cost = |c: f64| SubsystemCost::new(c, 0.0, 0.0, 0.0);
        let costs = CostBook {
            wec: cost(self.unit_costs[0]),
            tec: cost(self.unit_costs[1]),
            owt: cost(self.unit_costs[2]),
            fpv: cost(self.unit_costs[3]),
            bess: cost(self.bess_cost),
            bess_degradation: 0.0,
            lifetime: 1.0,
        };
        SizingScenario {
            load: self.load.clone(),
            generation: PerResource::from_fn(|r| self.generation[index(r)].clone()),
            costs,
            bess: BessParams {
                charge_efficiency: self.efficiencies.0,
                discharge_efficiency: self.efficiencies.1,
                soc_min: 0.1,
                soc_max: 0.9,
                p_max_charge: self.p_max,
                p_max_discharge: self.p_max,
            },
            count_upper_bounds: PerResource::from_fn(|r| self.bounds[index(r)]),
            storage_enabled: self.storage,
            curtailment_enabled: self.curtailment,
        }
    }

    /// Integer assignments the exhaustive oracle has to visit, before pruning.
    pub fn lattice_size(&self) -> u64 {
        self.bounds.iter().map(|b| b + 1).product()
    }
}

pub fn index(r: Resource) -> usize {
    match r {
        Resource::Wec => 0,
        Resource::Tec => 1,
        Resource::Owt => 2,
        Resource::Fpv => 3,
    }
}

/// Whole-kW values keep the instances well scaled and make ties between build-outs common.
fn kw(max: u32) -> impl Strategy<Value = f64> {
    (0..=max).prop_map(f64::from)
}

pub fn toy(
    horizons: std::ops::RangeInclusive<usize>,
    max_bound: u64,
    max_lattice: u64,
) -> impl Strategy<Value = Toy> {
    horizons
        .prop_flat_map(move |t| {
            (
                vec(kw(150), t),
                [
                    vec(kw(80), t),
                    vec(kw(80), t),
                    vec(kw(80), t),
                    vec(kw(80), t),
                ],
                [1u32..50, 1u32..50, 1u32..50, 1u32..50],
                1u32..200,
                [0..=max_bound, 0..=max_bound, 0..=max_bound, 0..=max_bound],
                (70u32..=100, 70u32..=100),
                kw(100),
                any::<bool>(),
                prop::bool::weighted(0.8),
            )
        })
        .prop_map(
            |(load, generation, c, b, bounds, (ec, ed), p_max, storage, curtailment)| Toy {
                load,
                generation,
                unit_costs: c.map(f64::from),
                bess_cost: f64::from(b) / 100.0,
                bounds,
                efficiencies: (f64::from(ec) / 100.0, f64::from(ed) / 100.0),
                p_max,
                storage,
                curtailment,
            },
        )
        .prop_filter("lattice too large for the oracle", move |t| {
            t.lattice_size() <= max_lattice
        })
}
