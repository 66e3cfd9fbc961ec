use super::{CostBook, ModelError, Result};
use crate::num::Scalar;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resource {
    Wec,
    Tec,
    Owt,
    Fpv,
}

impl Resource {
    pub const ALL: [Resource; 4] = [Resource::Wec, Resource::Tec, Resource::Owt, Resource::Fpv];

    pub fn key(self) -> &'static str {
        match self {
            Resource::Wec => "wec",
            Resource::Tec => "tec",
            Resource::Owt => "owt",
            Resource::Fpv => "fpv",
        }
    }
}

/// One value per generator type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PerResource<V> {
    pub wec: V,
    pub tec: V,
    pub owt: V,
    pub fpv: V,
}

impl<V> PerResource<V> {
    pub fn from_fn(mut f: impl FnMut(Resource) -> V) -> Self {
        Self {
            wec: f(Resource::Wec),
            tec: f(Resource::Tec),
            owt: f(Resource::Owt),
            fpv: f(Resource::Fpv),
        }
    }

    pub fn get(&self, r: Resource) -> &V {
        match r {
            Resource::Wec => &self.wec,
            Resource::Tec => &self.tec,
            Resource::Owt => &self.owt,
            Resource::Fpv => &self.fpv,
        }
    }

    pub fn get_mut(&mut self, r: Resource) -> &mut V {
        match r {
            Resource::Wec => &mut self.wec,
            Resource::Tec => &mut self.tec,
            Resource::Owt => &mut self.owt,
            Resource::Fpv => &mut self.fpv,
        }
    }
}

impl PerResource<u64> {
    /// Branch-and-bound needs finite count bounds; these leave ample headroom for platform loads
    /// of a few hundred MW.
    pub fn default_count_bounds() -> Self {
        Self {
            wec: 200,
            tec: 200,
            owt: 200,
            fpv: 1_000_000,
        }
    }
}

/// Battery parameters. Power limits are in kW and energies in kWh over one-hour steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BessParams<T> {
    pub charge_efficiency: T,
    pub discharge_efficiency: T,
    pub soc_min: T,
    pub soc_max: T,
    pub p_max_charge: T,
    pub p_max_discharge: T,
}

impl<T: Scalar> BessParams<T> {
    /// 80 % charge / 95 % discharge efficiency, a 10–90 % SOC window and power limits of a
    /// quarter of the peak load.
    pub fn defaults_for_peak_load(peak_load: T) -> Self {
        let p_max = T::lit(0.25) * peak_load;
        Self {
            charge_efficiency: T::lit(0.80),
            discharge_efficiency: T::lit(0.95),
            soc_min: T::lit(0.1),
            soc_max: T::lit(0.9),
            p_max_charge: p_max,
            p_max_discharge: p_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v > T::zero() && v <= T::one();
        if !unit(self.charge_efficiency) || !unit(self.discharge_efficiency) {
            return Err(ModelError::Scenario(
                "BESS efficiencies must lie in (0, 1]".into(),
            ));
        }
        if !(self.soc_min >= T::zero() && self.soc_min < self.soc_max && self.soc_max <= T::one()) {
            return Err(ModelError::Scenario(
                "require 0 <= soc_min < soc_max <= 1".into(),
            ));
        }
        if !(self.p_max_charge >= T::zero() && self.p_max_discharge >= T::zero())
            || !self.p_max_charge.is_finite()
            || !self.p_max_discharge.is_finite()
        {
            return Err(ModelError::Scenario(
                "BESS power limits must be finite and >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// The complete sizing problem over a repeating horizon of hourly steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizingScenario<T> {
    /// kW per step; its length sets the horizon.
    pub load: Vec<T>,
    /// kW per unit per step.
    pub generation: PerResource<Vec<T>>,
    pub costs: CostBook<T>,
    pub bess: BessParams<T>,
    pub count_upper_bounds: PerResource<u64>,
    /// When false, the storage capacity is fixed at zero.
    pub storage_enabled: bool,
    /// When false, curtailment is fixed at zero.
    pub curtailment_enabled: bool,
}

impl<T: Scalar> SizingScenario<T> {
    pub fn horizon(&self) -> usize {
        self.load.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.horizon();
        if n == 0 {
            return Err(ModelError::Scenario("empty load profile".into()));
        }
        let ok = |v: &T| v.is_finite() && *v >= T::zero();
        if !self.load.iter().all(ok) {
            return Err(ModelError::Scenario(
                "load values must be finite and >= 0".into(),
            ));
        }
        for r in Resource::ALL {
            let g = self.generation.get(r);
            if g.len() != n {
                return Err(ModelError::Scenario(format!(
                    "{} profile has {} steps, load has {n}",
                    r.key(),
                    g.len()
                )));
            }
            if !g.iter().all(ok) {
                return Err(ModelError::Scenario(format!(
                    "{} profile values must be finite and >= 0",
                    r.key()
                )));
            }
        }
        if !self.costs.is_valid() {
            return Err(ModelError::Scenario(
                "costs must be >= 0, lifetime > 0, degradation >= 0".into(),
            ));
        }
        self.bess.validate()
    }

    pub fn peak_load(&self) -> T {
        self.load.iter().copied().fold(T::zero(), T::max)
    }

    /// Same scenario with every monetary cost multiplied by `k`.
    pub fn with_scaled_costs(&self, k: T) -> Self {
        Self {
            costs: self.costs.scaled(k),
            ..self.clone()
        }
    }
}

/// A flat-dominant platform load with a mild daytime bump, scaled so the daily mean is exactly
/// `mean_kw`. `base_fraction` sets the night level relative to the mean.
pub fn synthetic_platform_load(mean_kw: f64, base_fraction: f64) -> Vec<f64> {
    let bump: Vec<f64> = (0..24)
        .map(|h| {
            let x = (h as f64 - 6.0) / 12.0;
            if (0.0..=1.0).contains(&x) {
                (std::f64::consts::PI * x).sin()
            } else {
                0.0
            }
        })
        .collect();
    let bump_sum: f64 = bump.iter().sum();
    let base = mean_kw * base_fraction;
    let amplitude = (mean_kw - base) * 24.0 / bump_sum;
    bump.iter().map(|b| base + amplitude * b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_load_mean() {
        let load = synthetic_platform_load(50_000.0, 0.96);
        let mean = load.iter().sum::<f64>() / 24.0;
        assert!((mean - 50_000.0).abs() < 1e-9);
        assert_eq!(load[0], 48_000.0);
        assert!(load[12] > load[0]);
    }

    #[test]
    fn bess_validation() {
        let mut b = BessParams::<f64>::defaults_for_peak_load(100.0);
        assert!(b.validate().is_ok());
        assert_eq!(b.p_max_charge, 25.0);
        b.soc_min = 0.95;
        assert!(b.validate().is_err());
        b.soc_min = 0.1;
        b.charge_efficiency = 1.2;
        assert!(b.validate().is_err());
    }
}
