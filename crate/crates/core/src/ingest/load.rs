//! Platform load series: a two-column CSV of timestamp and demand in kW.

use super::{parse_timestamp, IngestError, Result};
use chrono::NaiveDateTime;
use std::io::Read;

#[derive(Debug, Clone, PartialEq)]
pub struct LoadRecord {
    pub timestamp: NaiveDateTime,
    pub load_kw: f64,
}

pub fn parse_load_csv<R: Read>(reader: R) -> Result<Vec<LoadRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (idx, row) in rdr.records().enumerate() {
        let line = idx + 2;
        let row = row.map_err(|e| IngestError::row(line, e.to_string()))?;
        let timestamp = row
            .get(0)
            .and_then(parse_timestamp)
            .ok_or_else(|| IngestError::row(line, "bad timestamp"))?;
        let load_kw = row
            .get(1)
            .and_then(|s| s.parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| IngestError::row(line, "load must be a non-negative number"))?;
        out.push(LoadRecord { timestamp, load_kw });
    }
    Ok(out)
}
