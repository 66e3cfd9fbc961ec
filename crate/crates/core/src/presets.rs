//! Built-in synthetic scenario: a 50 MW-average platform load and smooth met-ocean inputs
//! projected through the default unit models. None of these series are measurements.

use crate::ingest::TypicalDayProfile;
use crate::model::{synthetic_platform_load, BessParams, CostBook, PerResource, SizingScenario};
use crate::projection::{
    build_generation_profiles, FpvSpec, GenerationProfiles, ProjectionError, ProjectionSpecs,
    ResourceInputs, RotorSpec, WecPowerMatrix, WindShearSpec,
};
use std::f64::consts::PI;

/// Bundled attenuator-style matrix (750 kW rated).
pub const WEC_MATRIX_CSV: &str = include_str!("../data/wec_attenuator_v1.csv");

pub const WEC_RATED_KW: f64 = 750.0;
pub const FPV_PANEL_KW: f64 = 0.4;
/// Rating of the PV reference system the synthetic AC profile describes.
pub const PV_REFERENCE_SYSTEM_KW: f64 = 4.0;
pub const SYNTHETIC_MEAN_LOAD_KW: f64 = 50_000.0;
pub const SYNTHETIC_BASE_FRACTION: f64 = 0.96;

pub fn default_wec_matrix() -> WecPowerMatrix<f64> {
    WecPowerMatrix::from_csv(WEC_MATRIX_CSV.as_bytes(), WEC_RATED_KW)
        .expect("bundled power matrix is valid")
}

pub fn default_projection_specs() -> ProjectionSpecs<f64> {
    ProjectionSpecs {
        tec: RotorSpec::tidal_default(),
        owt: RotorSpec::wind_default(),
        shear: WindShearSpec::offshore_default(),
        wec: default_wec_matrix(),
        fpv: FpvSpec {
            panel_rating: FPV_PANEL_KW,
            reference_system_rating: PV_REFERENCE_SYSTEM_KW,
        },
    }
}

fn hourly(f: impl Fn(f64) -> f64) -> TypicalDayProfile {
    TypicalDayProfile::from_values(std::array::from_fn(|h| f(h as f64)))
}

/// Smooth diurnal met-ocean inputs: anemometer wind around 6.5 m/s, semidiurnal tidal currents,
/// a moderate swell and a clear-sky PV day.
pub fn synthetic_resource_inputs() -> ResourceInputs {
    ResourceInputs {
        wind_speed: hourly(|h| 6.5 + 1.0 * (2.0 * PI * (h - 15.0) / 24.0).cos()),
        current_speed: hourly(|h| 0.9 + 0.7 * (2.0 * PI * h / 12.42).sin().abs()),
        sig_wave_height: hourly(|h| 2.2 + 0.3 * (2.0 * PI * (h - 3.0) / 24.0).cos()),
        wave_period: hourly(|h| 8.0 + 0.5 * (2.0 * PI * h / 24.0).sin()),
        pv_system_ac: hourly(|h| {
            let x = (h - 6.0) / 12.0;
            if (0.0..=1.0).contains(&x) {
                0.8 * PV_REFERENCE_SYSTEM_KW * (PI * x).sin()
            } else {
                0.0
            }
        }),
    }
}

pub fn synthetic_generation() -> Result<GenerationProfiles, ProjectionError> {
    build_generation_profiles(&synthetic_resource_inputs(), &default_projection_specs())
}

/// Turns per-unit typical-day profiles and a load into a scenario with default costs, storage
/// parameters and count bounds.
pub fn scenario_from_profiles(
    load: Vec<f64>,
    generation: &GenerationProfiles,
) -> SizingScenario<f64> {
    let peak = load.iter().copied().fold(0.0, f64::max);
    SizingScenario {
        load,
        generation: PerResource {
            wec: generation.wec.hour_values.to_vec(),
            tec: generation.tec.hour_values.to_vec(),
            owt: generation.owt.hour_values.to_vec(),
            fpv: generation.fpv.hour_values.to_vec(),
        },
        costs: CostBook::table1(),
        bess: BessParams::defaults_for_peak_load(peak),
        count_upper_bounds: PerResource::default_count_bounds(),
        storage_enabled: true,
        curtailment_enabled: true,
    }
}

/// Published unit costs on the synthetic 50 MW-average load and synthetic resource profiles.
pub fn table1_defaults() -> SizingScenario<f64> {
    let generation = synthetic_generation().expect("synthetic inputs project cleanly");
    scenario_from_profiles(
        synthetic_platform_load(SYNTHETIC_MEAN_LOAD_KW, SYNTHETIC_BASE_FRACTION),
        &generation,
    )
}
