//! PVWatts hourly CSV exports.

use super::{IngestError, Result};
use chrono::{NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};
use std::io::Read;

/// PVWatts hourly output describes a typical meteorological year without a leap day; records are
/// stamped on this year so they can flow through the hourly series machinery.
pub const PVWATTS_NOMINAL_YEAR: i32 = 2021;

/// AC output allowed above the system rating before a row is rejected.
const RATING_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvRecord {
    pub month: u32,
    pub day: u32,
    pub hour: u32,
    pub timestamp: NaiveDateTime,
    /// kW after the inverter.
    pub ac_output: f64,
    /// kW.
    pub system_rating: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PvWattsData {
    pub records: Vec<PvRecord>,
    pub system_rating: f64,
    /// `(key, value)` metadata rows preceding the table.
    pub metadata: Vec<(String, String)>,
    /// Non-fatal findings, e.g. a row count other than 8760.
    pub diagnostics: Vec<String>,
}

fn parse_rating(value: &str) -> Option<f64> {
    value.trim().parse::<f64>().ok().filter(|v| *v > 0.0)
}

/// Parses a PVWatts hourly export.
///
/// The system rating comes from the `DC System Size (kW)` metadata row when present, otherwise
/// from `fallback_rating_kw`. AC output is converted from W to kW.
pub fn parse_pvwatts<R: Read>(reader: R, fallback_rating_kw: Option<f64>) -> Result<PvWattsData> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut metadata = Vec::new();
    let mut header: Option<(Vec<String>, usize)> = None;
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut rating: Option<f64> = None;
    let mut clamped = 0usize;

    for (idx, row) in rdr.records().enumerate() {
        let line = idx + 1;
        let row = row.map_err(|e| IngestError::row(line, e.to_string()))?;
        if row.iter().all(str::is_empty) {
            continue;
        }

        let Some((columns, ac_col)) = &header else {
            let first = row.get(0).unwrap_or("");
            if first.eq_ignore_ascii_case("month") {
                let columns: Vec<String> = row.iter().map(str::to_string).collect();
                let ac_col = columns
                    .iter()
                    .position(|c| {
                        let c = c.to_ascii_lowercase();
                        c.starts_with("ac") && c.contains("output")
                    })
                    .ok_or_else(|| {
                        IngestError::Format("PVWatts header has no AC output column".into())
                    })?;
                rating = rating.or(fallback_rating_kw);
                if rating.is_none() {
                    return Err(IngestError::Config(
                        "PVWatts system rating absent from metadata and not configured".into(),
                    ));
                }
                header = Some((columns, ac_col));
            } else {
                let key = first.to_string();
                let value = row.get(1).unwrap_or("").to_string();
                if key.to_ascii_lowercase().contains("system size") {
                    rating = rating.or(parse_rating(&value));
                }
                metadata.push((key, value));
            }
            continue;
        };

        if first_is_total(&row) {
            continue;
        }
        let field = |col: usize, name: &str| -> Result<f64> {
            row.get(col)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| IngestError::row(line, format!("bad {name} value")))
        };
        let month = field(0, "month")? as u32;
        let day = field(1, "day")? as u32;
        let hour = field(2, "hour")? as u32;
        let mut ac_w = field(*ac_col, &columns[*ac_col])?;
        if ac_w < 0.0 {
            // Inverter night tare shows up as small negative output.
            ac_w = 0.0;
            clamped += 1;
        }
        let system_rating = rating.unwrap_or_default();
        let ac_output = ac_w / 1000.0;
        if ac_output > system_rating * (1.0 + RATING_TOLERANCE) {
            return Err(IngestError::row(
                line,
                format!("AC output {ac_output} kW exceeds system rating {system_rating} kW"),
            ));
        }
        let timestamp = NaiveDate::from_ymd_opt(PVWATTS_NOMINAL_YEAR, month, day)
            .and_then(|d| d.and_hms_opt(hour, 0, 0))
            .ok_or_else(|| IngestError::row(line, "invalid month/day/hour"))?;
        records.push(PvRecord {
            month,
            day,
            hour,
            timestamp,
            ac_output,
            system_rating,
        });
    }

    if header.is_none() {
        return Err(IngestError::Format(
            "PVWatts file has no data header row".into(),
        ));
    }
    if records.len() != 8760 {
        diagnostics.push(format!(
            "expected 8760 hourly rows, found {}",
            records.len()
        ));
    }
    if clamped > 0 {
        diagnostics.push(format!("{clamped} negative AC values clamped to zero"));
    }
    Ok(PvWattsData {
        records,
        system_rating: rating.unwrap_or_default(),
        metadata,
        diagnostics,
    })
}

fn first_is_total(row: &csv::StringRecord) -> bool {
    row.get(0)
        .is_some_and(|c| c.eq_ignore_ascii_case("totals") || c.eq_ignore_ascii_case("total"))
}

/// Writes a minimal PVWatts-layout CSV that [`parse_pvwatts`] reads back.
pub fn write_pvwatts(data: &PvWattsData) -> String {
    let mut out = String::new();
    let mut wrote_rating = false;
    for (k, v) in &data.metadata {
        wrote_rating |= k.to_ascii_lowercase().contains("system size");
        out.push_str(&format!("\"{k}\",\"{v}\"\n"));
    }
    if !wrote_rating {
        out.push_str(&format!(
            "\"DC System Size (kW)\",\"{}\"\n",
            data.system_rating
        ));
    }
    out.push_str("\"Month\",\"Day\",\"Hour\",\"AC System Output (W)\"\n");
    for r in &data.records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.month,
            r.day,
            r.hour,
            r.ac_output * 1000.0
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn export(rows: usize) -> String {
        let mut s = String::from(
            "\"Requested Location\",\"offshore\"\n\"DC System Size (kW)\",\"4000\"\n\
             \"Month\",\"Day\",\"Hour\",\"Beam Irradiance (W/m^2)\",\"DC Array Output (W)\",\"AC System Output (W)\"\n",
        );
        let start = NaiveDate::from_ymd_opt(PVWATTS_NOMINAL_YEAR, 1, 1)
            .unwrap()
            .and_hms_opt(0, 0, 0)
            .unwrap();
        for k in 0..rows {
            let ts = start + chrono::Duration::hours(k as i64);
            let h = chrono::Timelike::hour(&ts);
            let ac = if (7..18).contains(&h) { 400000.0 } else { 0.0 };
            s.push_str(&format!(
                "{},{},{},0,0,{}\n",
                chrono::Datelike::month(&ts),
                chrono::Datelike::day(&ts),
                h,
                ac
            ));
        }
        s
    }

    #[test]
    fn full_year_export() {
        let data = parse_pvwatts(export(8760).as_bytes(), None).unwrap();
        assert_eq!(data.records.len(), 8760);
        assert_eq!(data.system_rating, 4000.0);
        assert!(data.diagnostics.is_empty());
        assert_eq!(data.records[12].ac_output, 400.0);
        assert_eq!(data.records[0].ac_output, 0.0);
    }

    #[test]
    fn short_export_is_warning_only() {
        let data = parse_pvwatts(export(48).as_bytes(), None).unwrap();
        assert_eq!(data.records.len(), 48);
        assert_eq!(data.diagnostics.len(), 1);
    }

    #[test]
    fn missing_ac_column() {
        let text = "\"Month\",\"Day\",\"Hour\",\"DC Array Output (W)\"\n1,1,0,0\n";
        assert!(matches!(
            parse_pvwatts(text.as_bytes(), Some(4.0)),
            Err(IngestError::Format(_))
        ));
    }

    #[test]
    fn rating_from_config_when_metadata_lacks_it() {
        let text = "\"Month\",\"Day\",\"Hour\",\"AC System Output (W)\"\n1,1,12,250\n";
        let data = parse_pvwatts(text.as_bytes(), Some(0.4)).unwrap();
        assert_eq!(data.system_rating, 0.4);
        assert_eq!(data.records[0].ac_output, 0.25);
        assert!(matches!(
            parse_pvwatts(text.as_bytes(), None),
            Err(IngestError::Config(_))
        ));
    }

    #[test]
    fn output_above_rating_rejected() {
        let text = "\"Month\",\"Day\",\"Hour\",\"AC System Output (W)\"\n1,1,12,500\n";
        assert!(matches!(
            parse_pvwatts(text.as_bytes(), Some(0.4)),
            Err(IngestError::Row { line: 2, .. })
        ));
    }

    #[test]
    fn negative_night_output_clamped() {
        let text = "\"Month\",\"Day\",\"Hour\",\"AC System Output (W)\"\n1,1,0,-1.2\n";
        let data = parse_pvwatts(text.as_bytes(), Some(4.0)).unwrap();
        assert_eq!(data.records[0].ac_output, 0.0);
        assert_eq!(data.diagnostics.len(), 2);
    }

    #[test]
    fn write_then_parse_is_identity() {
        let data = parse_pvwatts(export(72).as_bytes(), None).unwrap();
        let again = parse_pvwatts(write_pvwatts(&data).as_bytes(), None).unwrap();
        assert_eq!(again.records, data.records);
        assert_eq!(again.system_rating, data.system_rating);
    }
}
