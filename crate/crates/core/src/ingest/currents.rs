//! NOAA CO-OPS current observations (CSV: date-time, speed, direction).

use super::{parse_timestamp, IngestError, Result};
use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedUnit {
    /// CO-OPS default.
    #[default]
    Knots,
    CmPerS,
    MPerS,
}

impl SpeedUnit {
    pub fn to_m_per_s(self, speed: f64) -> f64 {
        match self {
            SpeedUnit::Knots => speed * 0.514444,
            SpeedUnit::CmPerS => speed * 0.01,
            SpeedUnit::MPerS => speed,
        }
    }

    fn m_per_s_in_unit(self, speed: f64) -> f64 {
        match self {
            SpeedUnit::Knots => speed / 0.514444,
            SpeedUnit::CmPerS => speed / 0.01,
            SpeedUnit::MPerS => speed,
        }
    }
}

impl FromStr for SpeedUnit {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "knots" | "kn" | "kt" => Ok(SpeedUnit::Knots),
            "cm_per_s" | "cm/s" => Ok(SpeedUnit::CmPerS),
            "m_per_s" | "m/s" => Ok(SpeedUnit::MPerS),
            other => Err(IngestError::Config(format!("unknown speed unit {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurrentRecord {
    pub timestamp: NaiveDateTime,
    /// m/s.
    pub speed: f64,
    /// Degrees true, in [0, 360).
    pub direction: f64,
}

/// Parses a currents CSV. Columns are located by header name (`date`/`time`, `speed`, `dir`),
/// falling back to positions 0, 1, 2. Observations are not aggregated.
pub fn parse_currents<R: Read>(reader: R, unit: SpeedUnit) -> Result<Vec<CurrentRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| IngestError::Format(e.to_string()))?
        .clone();
    let find = |pred: &dyn Fn(&str) -> bool, fallback: usize| {
        headers
            .iter()
            .position(|h| pred(&h.to_ascii_lowercase()))
            .unwrap_or(fallback)
    };
    let time_col = find(&|h| h.contains("date") || h.contains("time"), 0);
    let speed_col = find(&|h| h.contains("speed") || h.contains("velocity"), 1);
    let dir_col = find(&|h| h.starts_with("dir"), 2);

    let mut records = Vec::new();
    for (idx, row) in rdr.records().enumerate() {
        // Header is line 1.
        let line = idx + 2;
        let row = row.map_err(|e| IngestError::row(line, e.to_string()))?;
        let cell = |col: usize| row.get(col).unwrap_or("");
        let timestamp = parse_timestamp(cell(time_col))
            .ok_or_else(|| IngestError::row(line, format!("bad timestamp {:?}", cell(time_col))))?;
        let raw_speed: f64 = cell(speed_col)
            .parse()
            .map_err(|_| IngestError::row(line, format!("bad speed {:?}", cell(speed_col))))?;
        let direction: f64 = cell(dir_col)
            .parse()
            .map_err(|_| IngestError::row(line, format!("bad direction {:?}", cell(dir_col))))?;
        if !raw_speed.is_finite() || raw_speed < 0.0 {
            return Err(IngestError::row(
                line,
                "speed must be finite and non-negative",
            ));
        }
        if !direction.is_finite() {
            return Err(IngestError::row(line, "direction must be finite"));
        }
        records.push(CurrentRecord {
            timestamp,
            speed: unit.to_m_per_s(raw_speed),
            direction: direction.rem_euclid(360.0),
        });
    }
    Ok(records)
}

/// Writes records as a CSV that [`parse_currents`] reads back with the same unit.
pub fn write_currents(records: &[CurrentRecord], unit: SpeedUnit) -> String {
    let mut out = String::from("Date Time,Speed,Direction\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{}\n",
            r.timestamp.format("%Y-%m-%d %H:%M:%S"),
            unit.m_per_s_in_unit(r.speed),
            r.direction
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knots_conversion() {
        let text = "Date Time, Speed, Direction\n2022-01-01 00:00, 2.0, 45\n";
        let recs = parse_currents(text.as_bytes(), SpeedUnit::Knots).unwrap();
        assert!((recs[0].speed - 1.028888).abs() < 1e-12);
        assert_eq!(recs[0].direction, 45.0);
    }

    #[test]
    fn zero_speed_any_unit() {
        for unit in [SpeedUnit::Knots, SpeedUnit::CmPerS, SpeedUnit::MPerS] {
            let text = "Date Time,Speed,Direction\n2022-01-01 00:00,0,10\n";
            assert_eq!(parse_currents(text.as_bytes(), unit).unwrap()[0].speed, 0.0);
        }
    }

    #[test]
    fn cm_per_s_conversion() {
        let text = "Date Time,Speed,Direction\n2022-01-01 00:00,150,10\n";
        let recs = parse_currents(text.as_bytes(), SpeedUnit::CmPerS).unwrap();
        assert!((recs[0].speed - 1.5).abs() < 1e-12);
    }

    #[test]
    fn six_minute_rows_are_not_aggregated() {
        let mut text = String::from("Date Time,Speed,Direction\n");
        for k in 0..10 {
            text.push_str(&format!("2022-01-01 00:{:02},1.0,90\n", k * 6));
        }
        assert_eq!(
            parse_currents(text.as_bytes(), SpeedUnit::MPerS)
                .unwrap()
                .len(),
            10
        );
    }

    #[test]
    fn unknown_unit_is_config_error() {
        assert!(matches!(
            "furlongs".parse::<SpeedUnit>(),
            Err(IngestError::Config(_))
        ));
        assert_eq!("cm_per_s".parse::<SpeedUnit>().unwrap(), SpeedUnit::CmPerS);
    }

    #[test]
    fn bad_timestamp_is_row_error() {
        let text = "Date Time,Speed,Direction\n2022-01-01 00:00,1,0\nnot a date,1,0\n";
        assert_eq!(
            parse_currents(text.as_bytes(), SpeedUnit::Knots).unwrap_err(),
            IngestError::row(3, "bad timestamp \"not a date\"")
        );
    }

    #[test]
    fn direction_wraps_into_range() {
        let text = "Date Time,Speed,Direction\n2022-01-01 00:00,1,360\n";
        let recs = parse_currents(text.as_bytes(), SpeedUnit::Knots).unwrap();
        assert_eq!(recs[0].direction, 0.0);
    }
}
