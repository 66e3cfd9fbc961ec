//! Per-unit electrical output of the four generator types.
//!
//! Rotor machines (tidal and wind turbines) use the swept-area power law
//! `P = ½ ρ π r² v³ C_p η`, saturated at the unit rating; wind speed is first lifted from
//! anemometer height to hub height with the logarithmic profile. Wave converters read a power
//! matrix by bilinear interpolation. Floating PV scales the PVWatts system output down to one
//! panel.

use crate::ingest::{HourlySeries, TypicalDayProfile};
use crate::num::Scalar;
use serde::{Deserialize, Serialize};
use std::io::Read;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProjectionError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, ProjectionError>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(ProjectionError::Parameter(msg()))
    }
}

/// Swept-area turbine parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotorSpec<T> {
    /// kg/m³
    pub fluid_density: T,
    /// m
    pub rotor_radius: T,
    pub power_coefficient: T,
    pub electrical_efficiency: T,
    /// kW
    pub rated_power: T,
    /// m/s
    pub cut_in_speed: T,
    /// m/s; tidal machines have none.
    pub cut_out_speed: Option<T>,
}

impl<T: Scalar> RotorSpec<T> {
    /// 500 kW floating tidal turbine.
    pub fn tidal_default() -> Self {
        Self {
            fluid_density: T::lit(1025.0),
            rotor_radius: T::lit(10.0),
            power_coefficient: T::lit(0.40),
            electrical_efficiency: T::lit(0.95),
            rated_power: T::lit(500.0),
            cut_in_speed: T::lit(0.5),
            cut_out_speed: None,
        }
    }

    /// 8 MW offshore wind turbine.
    pub fn wind_default() -> Self {
        Self {
            fluid_density: T::lit(1.225),
            rotor_radius: T::lit(80.0),
            power_coefficient: T::lit(0.45),
            electrical_efficiency: T::lit(0.95),
            rated_power: T::lit(8000.0),
            cut_in_speed: T::lit(3.0),
            cut_out_speed: Some(T::lit(25.0)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let betz = T::lit(16.0) / T::lit(27.0);
        check(self.fluid_density > T::zero(), || {
            "fluid density must be positive".into()
        })?;
        check(self.rotor_radius > T::zero(), || {
            "rotor radius must be positive".into()
        })?;
        check(
            self.power_coefficient > T::zero() && self.power_coefficient <= betz,
            || {
                format!(
                    "power coefficient {} outside (0, 16/27]",
                    self.power_coefficient
                )
            },
        )?;
        check(
            self.electrical_efficiency > T::zero() && self.electrical_efficiency <= T::one(),
            || "electrical efficiency outside (0, 1]".into(),
        )?;
        check(self.rated_power > T::zero(), || {
            "rated power must be positive".into()
        })?;
        check(self.cut_in_speed >= T::zero(), || {
            "cut-in speed must be non-negative".into()
        })?;
        if let Some(cut_out) = self.cut_out_speed {
            check(self.cut_in_speed < cut_out, || {
                "cut-in must be below cut-out".into()
            })?;
        }
        Ok(())
    }

    /// Uncapped swept-area output in kW.
    pub fn raw_power(&self, v: T) -> T {
        let half = T::lit(0.5);
        let pi = T::lit(std::f64::consts::PI);
        let watts = half
            * self.fluid_density
            * pi
            * self.rotor_radius
            * self.rotor_radius
            * v
            * v
            * v
            * self.power_coefficient
            * self.electrical_efficiency;
        watts / T::lit(1000.0)
    }
}

/// Logarithmic wind shear between anemometer and hub height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindShearSpec<T> {
    /// m
    pub measurement_height: T,
    /// m
    pub hub_height: T,
    /// m
    pub roughness_length: T,
}

impl<T: Scalar> WindShearSpec<T> {
    /// Open sea, buoy anemometer at 4 m, hub at 80 m.
    pub fn offshore_default() -> Self {
        Self {
            measurement_height: T::lit(4.0),
            hub_height: T::lit(80.0),
            roughness_length: T::lit(0.0002),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check(self.roughness_length > T::zero(), || {
            "roughness length must be positive".into()
        })?;
        check(self.measurement_height > self.roughness_length, || {
            "measurement height must exceed roughness length".into()
        })?;
        check(self.hub_height >= self.measurement_height, || {
            "hub height must not be below measurement height".into()
        })
    }
}

pub fn extrapolate_wind_speed<T: Scalar>(v_ref: T, shear: &WindShearSpec<T>) -> Result<T> {
    shear.validate()?;
    check(v_ref >= T::zero(), || {
        "wind speed must be non-negative".into()
    })?;
    if shear.hub_height == shear.measurement_height {
        return Ok(v_ref);
    }
    let z0 = shear.roughness_length;
    Ok(v_ref * (shear.hub_height / z0).ln() / (shear.measurement_height / z0).ln())
}

/// Electrical output of one turbine in kW: zero below cut-in and at or above cut-out, otherwise
/// the swept-area law capped at the rating.
pub fn swept_area_power<T: Scalar>(v: T, spec: &RotorSpec<T>) -> Result<T> {
    spec.validate()?;
    check(v >= T::zero(), || "flow speed must be non-negative".into())?;
    if v < spec.cut_in_speed || spec.cut_out_speed.is_some_and(|c| v >= c) {
        return Ok(T::zero());
    }
    Ok(spec.raw_power(v).min(spec.rated_power))
}

/// Tabulated wave converter output over (significant wave height, wave period).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WecPowerMatrix<T> {
    /// m, strictly ascending.
    pub hs_axis: Vec<T>,
    /// s, strictly ascending.
    pub te_axis: Vec<T>,
    /// kW, `cells[i][j]` at `(hs_axis[i], te_axis[j])`.
    pub cells: Vec<Vec<T>>,
    /// kW
    pub rated_power: T,
}

impl<T: Scalar> WecPowerMatrix<T> {
    pub fn new(
        hs_axis: Vec<T>,
        te_axis: Vec<T>,
        cells: Vec<Vec<T>>,
        rated_power: T,
    ) -> Result<Self> {
        let m = Self {
            hs_axis,
            te_axis,
            cells,
            rated_power,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.hs_axis.len() >= 2 && self.te_axis.len() >= 2, || {
            "power matrix needs at least two rows and two columns".into()
        })?;
        let ascending = |axis: &[T]| axis.windows(2).all(|w| w[0] < w[1]);
        check(ascending(&self.hs_axis), || {
            "wave height axis not strictly ascending".into()
        })?;
        check(ascending(&self.te_axis), || {
            "wave period axis not strictly ascending".into()
        })?;
        check(self.rated_power > T::zero(), || {
            "rated power must be positive".into()
        })?;
        check(self.cells.len() == self.hs_axis.len(), || {
            format!(
                "{} matrix rows for {} wave heights",
                self.cells.len(),
                self.hs_axis.len()
            )
        })?;
        for (i, row) in self.cells.iter().enumerate() {
            check(row.len() == self.te_axis.len(), || {
                format!(
                    "matrix row {i} has {} cells, expected {}",
                    row.len(),
                    self.te_axis.len()
                )
            })?;
            for (j, &c) in row.iter().enumerate() {
                check(c >= T::zero() && c <= self.rated_power, || {
                    format!("cell ({i},{j}) = {c} outside [0, rated power]")
                })?;
            }
        }
        Ok(())
    }

    /// Reads the CSV layout: first row holds the period axis (its first cell is a label), each
    /// following row starts with a wave height and continues with kW cells.
    pub fn from_csv<R: Read>(reader: R, rated_power: T) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .comment(Some(b'#'))
            .from_reader(reader);
        let parse = |s: &str| -> Result<T> {
            s.parse::<f64>()
                .ok()
                .and_then(T::from_f64)
                .ok_or_else(|| ProjectionError::Parameter(format!("non-numeric matrix cell {s:?}")))
        };
        let mut rows = rdr.records();
        let header = rows
            .next()
            .ok_or_else(|| ProjectionError::Parameter("empty power matrix".into()))?
            .map_err(|e| ProjectionError::Parameter(e.to_string()))?;
        let te_axis = header
            .iter()
            .skip(1)
            .map(parse)
            .collect::<Result<Vec<_>>>()?;
        let mut hs_axis = Vec::new();
        let mut cells = Vec::new();
        for row in rows {
            let row = row.map_err(|e| ProjectionError::Parameter(e.to_string()))?;
            let mut it = row.iter();
            hs_axis.push(parse(it.next().unwrap_or(""))?);
            cells.push(it.map(parse).collect::<Result<Vec<_>>>()?);
        }
        Self::new(hs_axis, te_axis, cells, rated_power)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("hs\\te");
        for te in &self.te_axis {
            out.push_str(&format!(",{te}"));
        }
        out.push('\n');
        for (hs, row) in self.hs_axis.iter().zip(&self.cells) {
            out.push_str(&format!("{hs}"));
            for c in row {
                out.push_str(&format!(",{c}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Locates `x` on `axis`: `None` means "below the axis and the edge line is all zero".
fn locate<T: Scalar>(axis: &[T], x: T, edge_is_zero: bool) -> Option<(usize, T)> {
    let n = axis.len();
    if x < axis[0] {
        return if edge_is_zero {
            None
        } else {
            Some((0, T::zero()))
        };
    }
    if x >= axis[n - 1] {
        return Some((n - 2, T::one()));
    }
    let i = axis.windows(2).position(|w| x < w[1]).unwrap_or(n - 2);
    Some((i, (x - axis[i]) / (axis[i + 1] - axis[i])))
}

/// Output of one wave converter in kW for a sea state.
pub fn wec_power<T: Scalar>(hs: T, te: T, matrix: &WecPowerMatrix<T>) -> Result<T> {
    matrix.validate()?;
    check(hs >= T::zero() && te >= T::zero(), || {
        "sea state must be non-negative".into()
    })?;
    if hs == T::zero() {
        return Ok(T::zero());
    }
    let first_row_zero = matrix.cells[0].iter().all(|c| c.is_zero());
    let first_col_zero = matrix.cells.iter().all(|row| row[0].is_zero());
    let (Some((i, u)), Some((j, w))) = (
        locate(&matrix.hs_axis, hs, first_row_zero),
        locate(&matrix.te_axis, te, first_col_zero),
    ) else {
        return Ok(T::zero());
    };
    let c = &matrix.cells;
    let one = T::one();
    let p = c[i][j] * (one - u) * (one - w)
        + c[i + 1][j] * u * (one - w)
        + c[i][j + 1] * (one - u) * w
        + c[i + 1][j + 1] * u * w;
    Ok(p.max(T::zero()).min(matrix.rated_power))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpvSpec<T> {
    /// kW per panel.
    pub panel_rating: T,
    /// kW rating of the system the PVWatts output describes.
    pub reference_system_rating: T,
}

impl<T: Scalar> FpvSpec<T> {
    pub fn validate(&self) -> Result<()> {
        check(
            self.panel_rating > T::zero() && self.reference_system_rating > T::zero(),
            || "PV ratings must be positive".into(),
        )
    }
}

pub fn fpv_unit_power<T: Scalar>(system_ac: T, spec: &FpvSpec<T>) -> Result<T> {
    spec.validate()?;
    check(system_ac >= T::zero(), || {
        "AC output must be non-negative".into()
    })?;
    Ok(system_ac * (spec.panel_rating / spec.reference_system_rating))
}

/// Everything needed to turn met-ocean data into per-unit power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSpecs<T> {
    pub tec: RotorSpec<T>,
    pub owt: RotorSpec<T>,
    pub shear: WindShearSpec<T>,
    pub wec: WecPowerMatrix<T>,
    pub fpv: FpvSpec<T>,
}

/// Typical-day met-ocean inputs, each in its native unit.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceInputs {
    /// m/s at anemometer height.
    pub wind_speed: TypicalDayProfile,
    /// m/s.
    pub current_speed: TypicalDayProfile,
    /// m.
    pub sig_wave_height: TypicalDayProfile,
    /// s.
    pub wave_period: TypicalDayProfile,
    /// kW of the PVWatts reference system.
    pub pv_system_ac: TypicalDayProfile,
}

/// Per-unit output profiles in kW.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationProfiles {
    pub wec: TypicalDayProfile,
    pub tec: TypicalDayProfile,
    pub owt: TypicalDayProfile,
    pub fpv: TypicalDayProfile,
}

fn require_complete(name: &str, p: &TypicalDayProfile) -> Result<()> {
    check(p.is_complete(), || {
        format!("{name} profile has hours without samples")
    })
}

/// Applies the unit models hour by hour to typical-day inputs.
pub fn build_generation_profiles(
    inputs: &ResourceInputs,
    specs: &ProjectionSpecs<f64>,
) -> Result<GenerationProfiles> {
    require_complete("wind speed", &inputs.wind_speed)?;
    require_complete("current speed", &inputs.current_speed)?;
    require_complete("wave height", &inputs.sig_wave_height)?;
    require_complete("wave period", &inputs.wave_period)?;
    require_complete("PV output", &inputs.pv_system_ac)?;

    let mut owt = inputs.wind_speed.clone();
    let mut tec = inputs.current_speed.clone();
    let mut wec = inputs.sig_wave_height.clone();
    let mut fpv = inputs.pv_system_ac.clone();
    for h in 0..owt.hour_values.len() {
        owt.hour_values[h] = owt_unit_power(inputs.wind_speed.hour_values[h], specs)?;
        tec.hour_values[h] = swept_area_power(inputs.current_speed.hour_values[h], &specs.tec)?;
        wec.hour_values[h] = wec_power(
            inputs.sig_wave_height.hour_values[h],
            inputs.wave_period.hour_values[h],
            &specs.wec,
        )?;
        fpv.hour_values[h] = fpv_unit_power(inputs.pv_system_ac.hour_values[h], &specs.fpv)?;
    }
    Ok(GenerationProfiles { wec, tec, owt, fpv })
}

/// Wind turbine output from an anemometer-height wind speed.
pub fn owt_unit_power<T: Scalar>(v_ref: T, specs: &ProjectionSpecs<T>) -> Result<T> {
    swept_area_power(extrapolate_wind_speed(v_ref, &specs.shear)?, &specs.owt)
}

/// Applies a fallible per-observation model to every present value of an hourly series.
pub fn project_series(
    series: &HourlySeries,
    model: impl Fn(f64) -> Result<f64>,
) -> Result<HourlySeries> {
    let values = series
        .values()
        .iter()
        .map(|v| v.map(&model).transpose())
        .collect::<Result<Vec<_>>>()?;
    Ok(match series.start() {
        Some(start) => HourlySeries::from_values(start, values),
        None => HourlySeries::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tec() -> RotorSpec<f64> {
        RotorSpec::tidal_default()
    }

    fn owt_no_cutin() -> RotorSpec<f64> {
        RotorSpec {
            cut_in_speed: 0.0,
            cut_out_speed: None,
            ..RotorSpec::wind_default()
        }
    }

    fn square_matrix() -> WecPowerMatrix<f64> {
        WecPowerMatrix::new(
            vec![1.0, 2.0],
            vec![6.0, 8.0],
            vec![vec![100.0, 150.0], vec![200.0, 250.0]],
            750.0,
        )
        .unwrap()
    }

    #[test]
    fn log_profile_to_hub_height() {
        let v = extrapolate_wind_speed(10.0, &WindShearSpec::offshore_default()).unwrap();
        assert_abs_diff_eq!(v, 13.02, epsilon = 0.01);
        // Hand evaluation: 10 * ln(400000) / ln(20000).
        assert_abs_diff_eq!(v, 10.0 * 400000f64.ln() / 20000f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn log_profile_identity_and_zero() {
        let same = WindShearSpec {
            hub_height: 4.0,
            ..WindShearSpec::offshore_default()
        };
        assert_eq!(extrapolate_wind_speed(7.3, &same).unwrap(), 7.3);
        assert_eq!(
            extrapolate_wind_speed(0.0, &WindShearSpec::offshore_default()).unwrap(),
            0.0
        );
    }

    #[test]
    fn bad_shear_rejected() {
        let bad = WindShearSpec {
            hub_height: 2.0,
            ..WindShearSpec::offshore_default()
        };
        assert!(extrapolate_wind_speed(5.0, &bad).is_err());
        let bad = WindShearSpec {
            roughness_length: 0.0,
            ..WindShearSpec::offshore_default()
        };
        assert!(extrapolate_wind_speed(5.0, &bad).is_err());
    }

    #[test]
    fn tidal_turbine_power() {
        assert_abs_diff_eq!(
            swept_area_power(2.0, &tec()).unwrap(),
            489.46,
            epsilon = 0.5
        );
        assert_eq!(swept_area_power(3.0, &tec()).unwrap(), 500.0);
        assert_eq!(swept_area_power(0.0, &tec()).unwrap(), 0.0);
        assert_eq!(swept_area_power(0.4, &tec()).unwrap(), 0.0);
    }

    #[test]
    fn wind_turbine_power() {
        assert_abs_diff_eq!(
            swept_area_power(10.0, &owt_no_cutin()).unwrap(),
            5264.7,
            epsilon = 5.0
        );
        let spec = RotorSpec::wind_default();
        assert_eq!(swept_area_power(25.0, &spec).unwrap(), 0.0);
        assert_eq!(swept_area_power(2.9, &spec).unwrap(), 0.0);
        assert_eq!(swept_area_power(20.0, &spec).unwrap(), 8000.0);
    }

    #[test]
    fn generic_over_f32() {
        let p = swept_area_power(2.0f32, &RotorSpec::<f32>::tidal_default()).unwrap();
        assert!((p - 489.46).abs() < 0.5);
    }

    #[test]
    fn invalid_rotor_specs() {
        let over_betz = RotorSpec {
            power_coefficient: 0.6,
            ..tec()
        };
        assert!(swept_area_power(1.0, &over_betz).is_err());
        let inverted = RotorSpec {
            cut_in_speed: 30.0,
            ..RotorSpec::wind_default()
        };
        assert!(swept_area_power(1.0, &inverted).is_err());
        assert!(swept_area_power(-1.0, &tec()).is_err());
    }

    #[test]
    fn wec_interpolation() {
        let m = square_matrix();
        assert_eq!(wec_power(0.0, 7.0, &m).unwrap(), 0.0);
        assert_eq!(wec_power(2.0, 6.0, &m).unwrap(), 200.0);
        assert_eq!(wec_power(1.0, 8.0, &m).unwrap(), 150.0);
        assert_abs_diff_eq!(wec_power(1.5, 7.0, &m).unwrap(), 175.0, epsilon = 1e-12);
    }

    #[test]
    fn wec_clamping() {
        let m = square_matrix();
        // Above the grid: edge cell.
        assert_eq!(wec_power(9.0, 20.0, &m).unwrap(), 250.0);
        // Below a non-zero edge: clamp to the edge.
        assert_eq!(wec_power(0.5, 6.0, &m).unwrap(), 100.0);
        // Below an all-zero edge: no output.
        let zero_edge = WecPowerMatrix::new(
            vec![0.5, 1.0],
            vec![6.0, 8.0],
            vec![vec![0.0, 0.0], vec![100.0, 200.0]],
            750.0,
        )
        .unwrap();
        assert_eq!(wec_power(0.3, 7.0, &zero_edge).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_matrix_rejected() {
        let m = WecPowerMatrix {
            hs_axis: vec![1.0],
            te_axis: vec![6.0, 8.0],
            cells: vec![vec![1.0, 2.0]],
            rated_power: 750.0,
        };
        assert!(wec_power(1.0, 7.0, &m).is_err());
        assert!(WecPowerMatrix::new(
            vec![1.0, 2.0],
            vec![6.0, 8.0],
            vec![vec![0.0, 900.0], vec![0.0, 0.0]],
            750.0
        )
        .is_err());
    }

    #[test]
    fn matrix_csv_round_trip() {
        let m = square_matrix();
        let back = WecPowerMatrix::from_csv(m.to_csv().as_bytes(), 750.0).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn fpv_scaling() {
        let spec = FpvSpec {
            panel_rating: 0.4,
            reference_system_rating: 4000.0,
        };
        assert_abs_diff_eq!(fpv_unit_power(400.0, &spec).unwrap(), 0.04, epsilon = 1e-15);
        assert_eq!(fpv_unit_power(0.0, &spec).unwrap(), 0.0);
        let same = FpvSpec {
            panel_rating: 0.4,
            reference_system_rating: 0.4,
        };
        assert_eq!(fpv_unit_power(0.25, &same).unwrap(), 0.25);
    }

    fn specs() -> ProjectionSpecs<f64> {
        ProjectionSpecs {
            tec: tec(),
            owt: owt_no_cutin(),
            shear: WindShearSpec::offshore_default(),
            wec: square_matrix(),
            fpv: FpvSpec {
                panel_rating: 0.4,
                reference_system_rating: 4.0,
            },
        }
    }

    fn zero_inputs() -> ResourceInputs {
        let z = TypicalDayProfile::constant(0.0);
        ResourceInputs {
            wind_speed: z.clone(),
            current_speed: z.clone(),
            sig_wave_height: z.clone(),
            wave_period: z.clone(),
            pv_system_ac: z,
        }
    }

    #[test]
    fn zero_inputs_give_zero_profiles() {
        let g = build_generation_profiles(&zero_inputs(), &specs()).unwrap();
        for p in [&g.wec, &g.tec, &g.owt, &g.fpv] {
            assert!(p.hour_values.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn constant_wind_profile() {
        let inputs = ResourceInputs {
            wind_speed: TypicalDayProfile::constant(10.0),
            ..zero_inputs()
        };
        let g = build_generation_profiles(&inputs, &specs()).unwrap();
        let expected = swept_area_power(
            extrapolate_wind_speed(10.0, &WindShearSpec::offshore_default()).unwrap(),
            &owt_no_cutin(),
        )
        .unwrap();
        assert!(g.owt.hour_values.iter().all(|&v| v == expected));
    }

    #[test]
    fn tidal_hour_at_cap() {
        let mut current = TypicalDayProfile::constant(1.0);
        current.hour_values[7] = 3.0;
        let inputs = ResourceInputs {
            current_speed: current,
            ..zero_inputs()
        };
        let g = build_generation_profiles(&inputs, &specs()).unwrap();
        assert_eq!(g.tec.hour_values[7], 500.0);
        assert!(g.tec.hour_values[0] < 500.0);
    }

    #[test]
    fn incomplete_input_rejected() {
        let mut inputs = zero_inputs();
        inputs.wind_speed.sample_counts[3] = 0;
        assert!(build_generation_profiles(&inputs, &specs()).is_err());
    }
}
