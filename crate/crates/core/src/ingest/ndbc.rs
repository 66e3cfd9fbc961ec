//! NDBC standard meteorological historical files.

use super::{IngestError, Result};
use chrono::{NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;

/// One buoy observation. Absent channels are `None`, never sentinel-valued.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeteoRecord {
    pub timestamp: NaiveDateTime,
    pub wind_direction: Option<f64>,
    /// m/s at anemometer height.
    pub wind_speed: Option<f64>,
    pub gust_speed: Option<f64>,
    /// Significant wave height, m.
    pub sig_wave_height: Option<f64>,
    /// Dominant wave period, s.
    pub dominant_wave_period: Option<f64>,
    /// Average wave period, s.
    pub average_wave_period: Option<f64>,
    /// Remaining channels present in this row, keyed by header name.
    pub other: BTreeMap<String, f64>,
}

/// Which wave period channel feeds the wave-converter power matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WavePeriodChannel {
    #[default]
    Dominant,
    Average,
}

impl WavePeriodChannel {
    pub fn select(self, record: &MeteoRecord) -> Option<f64> {
        match self {
            WavePeriodChannel::Dominant => record.dominant_wave_period,
            WavePeriodChannel::Average => record.average_wave_period,
        }
    }
}

/// Channel order of the modern (2007+) layout, used when a file carries no header.
const DEFAULT_COLUMNS: &[&str] = &[
    "YY", "MM", "DD", "hh", "mm", "WDIR", "WSPD", "GST", "WVHT", "DPD", "APD", "MWD", "PRES",
    "ATMP", "WTMP", "DEWP", "VIS", "PTDY", "TIDE",
];

/// Missing-value sentinel per channel, with the text NDBC writes for it.
const SENTINELS: &[(&str, f64, &str)] = &[
    ("WDIR", 999.0, "999"),
    ("WSPD", 99.0, "99.0"),
    ("GST", 99.0, "99.0"),
    ("WVHT", 99.0, "99.00"),
    ("DPD", 99.0, "99.00"),
    ("APD", 99.0, "99.00"),
    ("MWD", 999.0, "999"),
    ("PRES", 9999.0, "9999.0"),
    ("ATMP", 999.0, "999.0"),
    ("WTMP", 999.0, "999.0"),
    ("DEWP", 999.0, "999.0"),
    ("VIS", 99.0, "99.0"),
    ("PTDY", 99.0, "99.00"),
    ("TIDE", 99.0, "99.00"),
];

/// Sentinels assumed for channels not in the table above.
const GENERIC_SENTINELS: &[f64] = &[99.0, 999.0, 9999.0];

fn canonical_name(name: &str) -> &str {
    match name {
        "WD" => "WDIR",
        "BAR" => "PRES",
        "#YY" | "YYYY" | "#YYYY" => "YY",
        other => other,
    }
}

fn is_sentinel(channel: &str, value: f64) -> bool {
    match SENTINELS.iter().find(|(name, _, _)| *name == channel) {
        Some((_, sentinel, _)) => value == *sentinel,
        None => GENERIC_SENTINELS.contains(&value),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Column {
    Year,
    Month,
    Day,
    Hour,
    Minute,
    Channel,
}

fn column_kind(name: &str) -> Column {
    match name {
        "YY" => Column::Year,
        "MM" => Column::Month,
        "DD" => Column::Day,
        "hh" => Column::Hour,
        "mm" => Column::Minute,
        _ => Column::Channel,
    }
}

fn looks_like_header(line: &str) -> bool {
    let trimmed = line.trim_start();
    trimmed.starts_with('#')
        || trimmed
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic())
}

/// Parses an NDBC standard meteorological text file.
///
/// Columns are matched by header name, so both the modern 19-column layout and older station
/// layouts (no minute column, `WD`/`BAR` names) are accepted. The header must name `WSPD`,
/// `WVHT` and at least one of `DPD`/`APD`.
pub fn parse_ndbc<R: BufRead>(reader: R) -> Result<Vec<MeteoRecord>> {
    let mut columns: Option<Vec<String>> = None;
    let mut header_lines = 0usize;
    let mut records = Vec::new();
    let mut saw_content = false;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| IngestError::Format(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        saw_content = true;
        if records.is_empty() && header_lines < 2 && looks_like_header(&line) {
            // The first header line names the columns; a second one carries units.
            if header_lines == 0 {
                let names = line
                    .trim_start()
                    .trim_start_matches('#')
                    .split_whitespace()
                    .map(|n| canonical_name(n).to_string())
                    .collect::<Vec<_>>();
                columns = Some(validate_columns(names)?);
            }
            header_lines += 1;
            continue;
        }
        let cols =
            columns.get_or_insert_with(|| DEFAULT_COLUMNS.iter().map(|s| s.to_string()).collect());
        records.push(parse_row(cols, &line, line_no)?);
    }

    if !saw_content {
        return Err(IngestError::Format("empty NDBC file".into()));
    }
    Ok(records)
}

fn validate_columns(names: Vec<String>) -> Result<Vec<String>> {
    let has = |n: &str| names.iter().any(|c| c == n);
    for required in ["YY", "MM", "DD", "hh", "WSPD", "WVHT"] {
        if !has(required) {
            return Err(IngestError::Format(format!(
                "NDBC header lacks required column {required}"
            )));
        }
    }
    if !has("DPD") && !has("APD") {
        return Err(IngestError::Format(
            "NDBC header lacks a wave period column (DPD or APD)".into(),
        ));
    }
    Ok(names)
}

fn parse_row(columns: &[String], line: &str, line_no: usize) -> Result<MeteoRecord> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != columns.len() {
        return Err(IngestError::row(
            line_no,
            format!("expected {} columns, found {}", columns.len(), tokens.len()),
        ));
    }

    let (mut year, mut month, mut day, mut hour, mut minute) = (None, None, None, None, 0u32);
    let mut record = MeteoRecord {
        timestamp: NaiveDateTime::default(),
        wind_direction: None,
        wind_speed: None,
        gust_speed: None,
        sig_wave_height: None,
        dominant_wave_period: None,
        average_wave_period: None,
        other: BTreeMap::new(),
    };

    for (name, token) in columns.iter().zip(&tokens) {
        let kind = column_kind(name);
        if kind != Column::Channel {
            let v: u32 = token.parse().map_err(|_| {
                IngestError::row(line_no, format!("non-integer {name} token {token:?}"))
            })?;
            match kind {
                Column::Year => year = Some(if v < 100 { 1900 + v } else { v }),
                Column::Month => month = Some(v),
                Column::Day => day = Some(v),
                Column::Hour => hour = Some(v),
                Column::Minute => minute = v,
                Column::Channel => unreachable!(),
            }
            continue;
        }
        if *token == "MM" {
            continue;
        }
        let value: f64 = token.parse().map_err(|_| {
            IngestError::row(line_no, format!("non-numeric {name} token {token:?}"))
        })?;
        if !value.is_finite() {
            return Err(IngestError::row(
                line_no,
                format!("non-finite {name} value"),
            ));
        }
        if is_sentinel(name, value) {
            continue;
        }
        let slot = match name.as_str() {
            "WDIR" => &mut record.wind_direction,
            "WSPD" => &mut record.wind_speed,
            "GST" => &mut record.gust_speed,
            "WVHT" => &mut record.sig_wave_height,
            "DPD" => &mut record.dominant_wave_period,
            "APD" => &mut record.average_wave_period,
            _ => {
                record.other.insert(name.clone(), value);
                continue;
            }
        };
        *slot = Some(value);
    }

    for (label, value) in [
        ("WSPD", record.wind_speed),
        ("GST", record.gust_speed),
        ("WVHT", record.sig_wave_height),
    ] {
        if value.is_some_and(|v| v < 0.0) {
            return Err(IngestError::row(line_no, format!("negative {label}")));
        }
    }

    let date = year
        .zip(month)
        .zip(day)
        .and_then(|((y, m), d)| NaiveDate::from_ymd_opt(y as i32, m, d));
    record.timestamp = date
        .and_then(|d| d.and_hms_opt(hour.unwrap_or(0), minute, 0))
        .ok_or_else(|| IngestError::row(line_no, "invalid date/time fields"))?;
    Ok(record)
}

/// Writes records back in the modern NDBC layout: the standard channels followed by every extra
/// channel present in any record. Absent values are written as the channel sentinel.
pub fn write_ndbc(records: &[MeteoRecord]) -> String {
    let standard: Vec<&str> = DEFAULT_COLUMNS[5..].to_vec();
    let mut extras: Vec<String> = records
        .iter()
        .flat_map(|r| r.other.keys().cloned())
        .filter(|k| !standard.contains(&k.as_str()))
        .collect();
    extras.sort();
    extras.dedup();

    let mut out = String::from("#YY  MM DD hh mm");
    for name in standard
        .iter()
        .copied()
        .chain(extras.iter().map(String::as_str))
    {
        let _ = write!(out, " {name}");
    }
    out.push_str("\n#yr  mo dy hr mn\n");

    for r in records {
        let ts = r.timestamp;
        let _ = write!(
            out,
            "{} {:02} {:02} {:02} {:02}",
            chrono::Datelike::year(&ts),
            chrono::Datelike::month(&ts),
            chrono::Datelike::day(&ts),
            chrono::Timelike::hour(&ts),
            chrono::Timelike::minute(&ts)
        );
        for name in standard
            .iter()
            .copied()
            .chain(extras.iter().map(String::as_str))
        {
            let value = match name {
                "WDIR" => r.wind_direction,
                "WSPD" => r.wind_speed,
                "GST" => r.gust_speed,
                "WVHT" => r.sig_wave_height,
                "DPD" => r.dominant_wave_period,
                "APD" => r.average_wave_period,
                other => r.other.get(other).copied(),
            };
            match value {
                Some(v) => {
                    let _ = write!(out, " {v}");
                }
                None => {
                    let sentinel = SENTINELS
                        .iter()
                        .find(|(n, _, _)| *n == name)
                        .map_or("MM", |(_, _, text)| text);
                    let _ = write!(out, " {sentinel}");
                }
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
#YY  MM DD hh mm WDIR WSPD GST  WVHT   DPD   APD MWD   PRES  ATMP  WTMP  DEWP  VIS PTDY  TIDE
#yr  mo dy hr mn degT m/s  m/s     m   sec   sec degT   hPa  degC  degC  degC  nmi  hPa    ft
2022 01 01 00 00 180  7.0  9.0  1.50  8.00  6.00 170 1015.2  12.1  13.4   9.0 99.0 99.00 99.00
2022 01 01 01 00 190 99.0 99.0  1.60  8.33  6.10 999 1015.0  12.0  13.4   8.8 99.0 99.00 99.00
2022 01 01 02 00 999  6.2  7.9 99.00 99.00 99.00 999 9999.0 999.0 999.0 999.0 99.0 99.00 99.00
";

    #[test]
    fn parses_header_and_rows() {
        let recs = parse_ndbc(SAMPLE.as_bytes()).unwrap();
        assert_eq!(recs.len(), 3);
        let first = &recs[0];
        assert_eq!(first.wind_speed, Some(7.0));
        assert_eq!(first.sig_wave_height, Some(1.5));
        assert_eq!(first.dominant_wave_period, Some(8.0));
        assert_eq!(first.other.get("PRES"), Some(&1015.2));
        assert!(!first.other.contains_key("VIS"));
        assert_eq!(first.timestamp.to_string(), "2022-01-01 00:00:00");
    }

    #[test]
    fn sentinels_become_absent() {
        let recs = parse_ndbc(SAMPLE.as_bytes()).unwrap();
        assert_eq!(recs[1].wind_speed, None);
        assert_eq!(recs[1].gust_speed, None);
        assert_eq!(recs[2].sig_wave_height, None);
        assert_eq!(recs[2].wind_direction, None);
        assert!(recs[2].other.is_empty());
    }

    #[test]
    fn headerless_uses_default_layout() {
        let body = SAMPLE.lines().skip(2).collect::<Vec<_>>().join("\n");
        let recs = parse_ndbc(body.as_bytes()).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].wind_speed, Some(7.0));
    }

    #[test]
    fn old_layout_without_minutes() {
        let text = "YY MM DD hh WD WSPD GST WVHT DPD APD MWD BAR ATMP WTMP DEWP VIS\n\
                    98 01 01 00 180 5.5 6.0 1.2 7.0 5.0 999 1010.0 10.0 12.0 999.0 99.0\n";
        let recs = parse_ndbc(text.as_bytes()).unwrap();
        assert_eq!(recs[0].timestamp.to_string(), "1998-01-01 00:00:00");
        assert_eq!(recs[0].wind_direction, Some(180.0));
        assert_eq!(recs[0].other.get("PRES"), Some(&1010.0));
    }

    #[test]
    fn wrong_column_count_reports_line() {
        let text = format!("{SAMPLE}2022 01 01 03 00 180 7.0\n");
        assert!(matches!(
            parse_ndbc(text.as_bytes()),
            Err(IngestError::Row { line: 6, .. })
        ));
    }

    #[test]
    fn non_numeric_token_reports_line() {
        let text = SAMPLE.replace(" 7.0  9.0", " abc  9.0");
        assert!(matches!(
            parse_ndbc(text.as_bytes()),
            Err(IngestError::Row { line: 3, .. })
        ));
    }

    #[test]
    fn empty_file_is_format_error() {
        assert!(matches!(
            parse_ndbc("".as_bytes()),
            Err(IngestError::Format(_))
        ));
        assert!(matches!(
            parse_ndbc("\n  \n".as_bytes()),
            Err(IngestError::Format(_))
        ));
    }

    #[test]
    fn header_without_wave_period_rejected() {
        let text = "#YY MM DD hh mm WSPD WVHT\n2022 01 01 00 00 5.0 1.0\n";
        assert!(matches!(
            parse_ndbc(text.as_bytes()),
            Err(IngestError::Format(_))
        ));
    }

    #[test]
    fn realtime_missing_marker() {
        let text = "#YY MM DD hh mm WSPD WVHT DPD\n2022 01 01 00 00 MM 1.0 MM\n";
        let recs = parse_ndbc(text.as_bytes()).unwrap();
        assert_eq!(recs[0].wind_speed, None);
        assert_eq!(recs[0].dominant_wave_period, None);
    }

    #[test]
    fn write_then_parse_is_identity() {
        let recs = parse_ndbc(SAMPLE.as_bytes()).unwrap();
        let text = write_ndbc(&recs);
        assert_eq!(parse_ndbc(text.as_bytes()).unwrap(), recs);
    }

    #[test]
    fn period_channel_selection() {
        let recs = parse_ndbc(SAMPLE.as_bytes()).unwrap();
        assert_eq!(WavePeriodChannel::Dominant.select(&recs[0]), Some(8.0));
        assert_eq!(WavePeriodChannel::Average.select(&recs[0]), Some(6.0));
    }
}
