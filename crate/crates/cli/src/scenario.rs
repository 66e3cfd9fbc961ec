//! Scenario documents and their resolution into a solvable [`Scenario`].

use crate::CliError;
use offshore_sizing::ingest::{
    parse_currents, parse_load_csv, parse_ndbc, parse_pvwatts, to_hourly, typical_day, Aggregation,
    HourlySeries, IngestError, ProfileDocument, SpeedUnit, TypicalDayProfile, WavePeriodChannel,
};
use offshore_sizing::model::{
    synthetic_platform_load, BessParams, CostBook, PerResource, Resource, SizingScenario,
    SubsystemCost,
};
use offshore_sizing::presets;
use offshore_sizing::projection::{
    build_generation_profiles, FpvSpec, ProjectionSpecs, ResourceInputs, RotorSpec, WecPowerMatrix,
    WindShearSpec,
};
use offshore_sizing::solver::DEFAULT_ENUMERATION_BUDGET;
use offshore_sizing::{Options, Scenario};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Duration;

/// Name accepted in place of a scenario path.
pub const BUILTIN_DEFAULT: &str = "table1_defaults";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    pub region: Option<String>,
    /// Only `table1_defaults` is defined.
    pub preset: Option<String>,
    /// Inline per-step profiles or a path to a profiles document.
    pub profiles: Option<ProfilesSource>,
    pub datasets: Option<DatasetPaths>,
    pub synthetic_load: Option<SyntheticLoad>,
    pub projection: ProjectionOverrides,
    pub costs: CostOverrides,
    pub bess: BessOverrides,
    pub bounds: BoundOverrides,
    pub storage_enabled: Option<bool>,
    pub curtailment_enabled: Option<bool>,
    pub solver: SolverSettings,
}

/// Either `"path/to/profiles.json"` or `{"load": [...], "owt": [...], ...}` in kW.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfilesSource {
    Path(PathBuf),
    Inline(BTreeMap<String, Vec<f64>>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetPaths {
    pub ndbc: Option<PathBuf>,
    pub currents: Option<PathBuf>,
    /// `knots` (default), `cm/s` or `m/s`.
    pub current_unit: Option<String>,
    pub pvwatts: Option<PathBuf>,
    /// Used when the PVWatts export carries no system size.
    pub pv_rating_kw: Option<f64>,
    pub wec_matrix: Option<PathBuf>,
    /// `dominant` (default) or `average`.
    pub wave_period: Option<String>,
    pub load: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticLoad {
    pub mean_kw: f64,
    pub base_fraction: f64,
}

impl Default for SyntheticLoad {
    fn default() -> Self {
        Self {
            mean_kw: presets::SYNTHETIC_MEAN_LOAD_KW,
            base_fraction: presets::SYNTHETIC_BASE_FRACTION,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProjectionOverrides {
    pub tec: Option<RotorSpec<f64>>,
    pub owt: Option<RotorSpec<f64>>,
    pub shear: Option<WindShearSpec<f64>>,
    pub fpv: Option<FpvSpec<f64>>,
    pub wec_rated_kw: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostOverrides {
    pub wec: Option<SubsystemCost<f64>>,
    pub tec: Option<SubsystemCost<f64>>,
    pub owt: Option<SubsystemCost<f64>>,
    pub fpv: Option<SubsystemCost<f64>>,
    pub bess: Option<SubsystemCost<f64>>,
    pub bess_degradation: Option<f64>,
    pub lifetime: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BessOverrides {
    pub charge_efficiency: Option<f64>,
    pub discharge_efficiency: Option<f64>,
    pub soc_min: Option<f64>,
    pub soc_max: Option<f64>,
    pub p_max_charge: Option<f64>,
    pub p_max_discharge: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundOverrides {
    pub wec: Option<u64>,
    pub tec: Option<u64>,
    pub owt: Option<u64>,
    pub fpv: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub gap: Option<f64>,
    pub node_limit: Option<usize>,
    pub time_limit_s: Option<f64>,
    pub feasibility_tol: Option<f64>,
    pub integrality_tol: Option<f64>,
    /// Enumeration budget for the oracle.
    pub budget: Option<u64>,
}

/// A scenario document together with the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedScenario {
    pub file: ScenarioFile,
    pub base_dir: PathBuf,
}

impl LoadedScenario {
    /// Reads `arg` as a JSON path, or the built-in default when it equals [`BUILTIN_DEFAULT`].
    pub fn load(arg: &str) -> Result<Self, CliError> {
        if arg == BUILTIN_DEFAULT {
            return Ok(Self {
                file: ScenarioFile {
                    preset: Some(BUILTIN_DEFAULT.into()),
                    region: Some("synthetic".into()),
                    ..ScenarioFile::default()
                },
                base_dir: PathBuf::from("."),
            });
        }
        let path = Path::new(arg);
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let file: ScenarioFile = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { file, base_dir })
    }

    fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn open(&self, p: &Path) -> Result<(PathBuf, BufReader<File>), CliError> {
        let full = self.path(p);
        let f =
            File::open(&full).map_err(|e| CliError::Config(format!("{}: {e}", full.display())))?;
        Ok((full, BufReader::new(f)))
    }

    pub fn region(&self) -> String {
        self.file.region.clone().unwrap_or_else(|| "unnamed".into())
    }

    pub fn projection_specs(&self) -> Result<ProjectionSpecs<f64>, CliError> {
        let mut specs = presets::default_projection_specs();
        let o = &self.file.projection;
        if let Some(tec) = o.tec {
            specs.tec = tec;
        }
        if let Some(owt) = o.owt {
            specs.owt = owt;
        }
        if let Some(shear) = o.shear {
            specs.shear = shear;
        }
        if let Some(fpv) = o.fpv {
            specs.fpv = fpv;
        }
        let rated = o.wec_rated_kw.unwrap_or(presets::WEC_RATED_KW);
        let matrix_path = self
            .file
            .datasets
            .as_ref()
            .and_then(|d| d.wec_matrix.as_ref());
        specs.wec = match matrix_path {
            Some(p) => {
                let (full, reader) = self.open(p)?;
                WecPowerMatrix::from_csv(reader, rated)
                    .map_err(|e| CliError::Data(format!("{}: {e}", full.display())))?
            }
            None => WecPowerMatrix::from_csv(presets::WEC_MATRIX_CSV.as_bytes(), rated)
                .map_err(|e| CliError::Config(format!("bundled power matrix: {e}")))?,
        };
        specs.tec.validate().map_err(config)?;
        specs.owt.validate().map_err(config)?;
        specs.shear.validate().map_err(config)?;
        specs.fpv.validate().map_err(config)?;
        Ok(specs)
    }

    /// Ingests the raw datasets and projects them into per-unit typical-day profiles (plus the
    /// load profile when a load file is given).
    pub fn build_profiles(&self) -> Result<ProfileDocument, CliError> {
        let ds = self
            .file
            .datasets
            .as_ref()
            .ok_or_else(|| CliError::Config("scenario lists no datasets".into()))?;
        let missing: Vec<&str> = [
            ("ndbc", &ds.ndbc),
            ("currents", &ds.currents),
            ("pvwatts", &ds.pvwatts),
        ]
        .into_iter()
        .filter(|(_, p)| p.is_none())
        .map(|(n, _)| n)
        .collect();
        if !missing.is_empty() {
            return Err(CliError::Config(format!(
                "datasets missing: {}",
                missing.join(", ")
            )));
        }
        let specs = self.projection_specs()?;
        let channel = match ds
            .wave_period
            .as_deref()
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            None | Some("dominant") | Some("dpd") => WavePeriodChannel::Dominant,
            Some("average") | Some("apd") => WavePeriodChannel::Average,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "unknown wave period channel {other:?}"
                )))
            }
        };
        let unit: SpeedUnit = match &ds.current_unit {
            Some(u) => u.parse().map_err(config)?,
            None => SpeedUnit::default(),
        };

        let (ndbc_path, reader) = self.open(ds.ndbc.as_deref().unwrap_or(Path::new("")))?;
        let meteo = parse_ndbc(reader).map_err(|e| data(&ndbc_path, e))?;
        let (cur_path, reader) = self.open(ds.currents.as_deref().unwrap_or(Path::new("")))?;
        let currents = parse_currents(reader, unit).map_err(|e| data(&cur_path, e))?;
        let (pv_path, reader) = self.open(ds.pvwatts.as_deref().unwrap_or(Path::new("")))?;
        let pv = parse_pvwatts(reader, ds.pv_rating_kw).map_err(|e| data(&pv_path, e))?;

        let mut fpv_spec = specs.fpv;
        fpv_spec.reference_system_rating = pv.system_rating;
        let specs = ProjectionSpecs {
            fpv: fpv_spec,
            ..specs
        };

        let owt = to_hourly(
            &meteo,
            |r| {
                r.wind_speed
                    .map(|v| offshore_sizing::projection::owt_unit_power(v, &specs))
                    .and_then(Result::ok)
            },
            Aggregation::Mean,
        );
        let wec = to_hourly(
            &meteo,
            |r| {
                let te = channel.select(r)?;
                let hs = r.sig_wave_height?;
                offshore_sizing::projection::wec_power(hs, te, &specs.wec).ok()
            },
            Aggregation::Mean,
        );
        let tec = to_hourly(
            &currents,
            |r| offshore_sizing::projection::swept_area_power(r.speed, &specs.tec).ok(),
            Aggregation::Mean,
        );
        let fpv = to_hourly(
            &pv.records,
            |r| offshore_sizing::projection::fpv_unit_power(r.ac_output, &specs.fpv).ok(),
            Aggregation::Mean,
        );

        let mut doc = ProfileDocument::default();
        doc.insert("owt", &day(&owt, &ndbc_path)?);
        doc.insert("wec", &day(&wec, &ndbc_path)?);
        doc.insert("tec", &day(&tec, &cur_path)?);
        doc.insert("fpv", &day(&fpv, &pv_path)?);
        if let Some(p) = &ds.load {
            let (load_path, reader) = self.open(p)?;
            let records = parse_load_csv(reader).map_err(|e| data(&load_path, e))?;
            let hourly = to_hourly(&records, |r| Some(r.load_kw), Aggregation::Mean);
            doc.insert("load", &day(&hourly, &load_path)?);
        }
        Ok(doc)
    }

    /// Per-step profiles keyed by `load`/`wec`/`tec`/`owt`/`fpv`, from whichever source the
    /// scenario names; falls back to the synthetic defaults.
    fn step_profiles(&self) -> Result<BTreeMap<String, Vec<f64>>, CliError> {
        let from_doc = |doc: &ProfileDocument| -> Result<BTreeMap<String, Vec<f64>>, CliError> {
            doc.0
                .iter()
                .map(|(k, entry)| {
                    let p: TypicalDayProfile = entry
                        .to_profile()
                        .map_err(|e| CliError::Data(format!("profile {k}: {e}")))?;
                    Ok((k.clone(), p.hour_values.to_vec()))
                })
                .collect()
        };
        match &self.file.profiles {
            Some(ProfilesSource::Inline(map)) => return Ok(map.clone()),
            Some(ProfilesSource::Path(p)) => {
                let full = self.path(p);
                let text = std::fs::read_to_string(&full)
                    .map_err(|e| CliError::Config(format!("{}: {e}", full.display())))?;
                let doc = ProfileDocument::from_json(&text).map_err(|e| data(&full, e))?;
                return from_doc(&doc);
            }
            None => {}
        }
        if self.file.datasets.is_some() {
            return from_doc(&self.build_profiles()?);
        }
        match self.file.preset.as_deref() {
            None | Some(BUILTIN_DEFAULT) => {}
            Some(other) => return Err(CliError::Config(format!("unknown preset {other:?}"))),
        }
        let inputs: ResourceInputs = presets::synthetic_resource_inputs();
        let generation =
            build_generation_profiles(&inputs, &self.projection_specs()?).map_err(config)?;
        Ok(BTreeMap::from([
            ("wec".to_string(), generation.wec.hour_values.to_vec()),
            ("tec".to_string(), generation.tec.hour_values.to_vec()),
            ("owt".to_string(), generation.owt.hour_values.to_vec()),
            ("fpv".to_string(), generation.fpv.hour_values.to_vec()),
        ]))
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let mut profiles = self.step_profiles()?;
        for key in profiles.keys() {
            if !["load", "wec", "tec", "owt", "fpv"].contains(&key.as_str()) {
                return Err(CliError::Config(format!("unknown profile {key:?}")));
            }
        }
        let load = match profiles.remove("load") {
            Some(load) => load,
            None => {
                let s = self.file.synthetic_load.unwrap_or_default();
                synthetic_platform_load(s.mean_kw, s.base_fraction)
            }
        };
        let n = load.len();
        let generation = PerResource::from_fn(|r| {
            profiles
                .get(r.key())
                .cloned()
                .unwrap_or_else(|| vec![0.0; n])
        });

        let mut costs = CostBook::table1();
        let c = &self.file.costs;
        for (r, v) in [
            (Resource::Wec, c.wec),
            (Resource::Tec, c.tec),
            (Resource::Owt, c.owt),
            (Resource::Fpv, c.fpv),
        ] {
            if let Some(v) = v {
                match r {
                    Resource::Wec => costs.wec = v,
                    Resource::Tec => costs.tec = v,
                    Resource::Owt => costs.owt = v,
                    Resource::Fpv => costs.fpv = v,
                }
            }
        }
        if let Some(v) = c.bess {
            costs.bess = v;
        }
        if let Some(v) = c.bess_degradation {
            costs.bess_degradation = v;
        }
        if let Some(v) = c.lifetime {
            costs.lifetime = v;
        }

        let peak = load.iter().copied().fold(0.0, f64::max);
        let mut bess = BessParams::defaults_for_peak_load(peak);
        let b = &self.file.bess;
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut bess.charge_efficiency, b.charge_efficiency);
        set(&mut bess.discharge_efficiency, b.discharge_efficiency);
        set(&mut bess.soc_min, b.soc_min);
        set(&mut bess.soc_max, b.soc_max);
        set(&mut bess.p_max_charge, b.p_max_charge);
        set(&mut bess.p_max_discharge, b.p_max_discharge);

        let mut bounds = PerResource::default_count_bounds();
        let o = &self.file.bounds;
        for (r, v) in [
            (Resource::Wec, o.wec),
            (Resource::Tec, o.tec),
            (Resource::Owt, o.owt),
            (Resource::Fpv, o.fpv),
        ] {
            if let Some(v) = v {
                *bounds.get_mut(r) = v;
            }
        }

        let scenario = SizingScenario {
            load,
            generation,
            costs,
            bess,
            count_upper_bounds: bounds,
            storage_enabled: self.file.storage_enabled.unwrap_or(true),
            curtailment_enabled: self.file.curtailment_enabled.unwrap_or(true),
        };
        scenario.validate().map_err(config)?;
        Ok(scenario)
    }

    pub fn options(&self) -> Result<Options, CliError> {
        let mut opts = Options::default();
        let s = &self.file.solver;
        if let Some(v) = s.gap {
            opts.gap = v;
        }
        if let Some(v) = s.node_limit {
            opts.node_limit = v;
        }
        if let Some(v) = s.time_limit_s {
            opts.time_limit = Some(
                Duration::try_from_secs_f64(v)
                    .map_err(|e| CliError::Config(format!("time_limit_s: {e}")))?,
            );
        }
        if let Some(v) = s.feasibility_tol {
            opts.feasibility_tol = v;
        }
        if let Some(v) = s.integrality_tol {
            opts.integrality_tol = v;
        }
        for (name, v) in [
            ("gap", opts.gap),
            ("feasibility_tol", opts.feasibility_tol),
            ("integrality_tol", opts.integrality_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive")));
            }
        }
        Ok(opts)
    }

    pub fn budget(&self) -> u128 {
        self.file
            .solver
            .budget
            .map_or(DEFAULT_ENUMERATION_BUDGET, u128::from)
    }
}

fn day(series: &HourlySeries, source: &Path) -> Result<TypicalDayProfile, CliError> {
    typical_day(series).map_err(|e| data(source, e))
}

fn data(path: &Path, e: IngestError) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

fn config(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}
