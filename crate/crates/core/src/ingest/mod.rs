//! Parsers for the public buoy, tidal-current and PVWatts datasets, plus hourly aggregation and
//! hour-of-day averaging into typical-day profiles.
//!
//! Every parser is a pure function of its input stream. Missing observations are carried as
//! `None`; sentinel values never leak into parsed records.

mod currents;
mod load;
mod ndbc;
mod pvwatts;
mod series;

pub use currents::{parse_currents, write_currents, CurrentRecord, SpeedUnit};
pub use load::{parse_load_csv, LoadRecord};
pub use ndbc::{parse_ndbc, write_ndbc, MeteoRecord, WavePeriodChannel};
pub use pvwatts::{parse_pvwatts, write_pvwatts, PvRecord, PvWattsData, PVWATTS_NOMINAL_YEAR};
pub use series::{
    to_hourly, typical_day, Aggregation, HourlySeries, ProfileDocument, ProfileEntry, Timestamped,
    TypicalDayProfile, HOURS_PER_DAY,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum IngestError {
    #[error("format error: {0}")]
    Format(String),
    #[error("line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("incomplete profile: no samples for hour(s) {missing:?}")]
    IncompleteProfile { missing: Vec<usize> },
}

impl IngestError {
    pub(crate) fn row(line: usize, message: impl Into<String>) -> Self {
        IngestError::Row {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, IngestError>;

/// Timestamp layouts accepted in the CSV datasets.
const TIMESTAMP_FORMATS: &[&str] = &[
    "%Y-%m-%d %H:%M",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%dT%H:%M:%S",
    "%Y/%m/%d %H:%M",
    "%Y/%m/%d %H:%M:%S",
    "%m/%d/%Y %H:%M",
];

pub(crate) fn parse_timestamp(text: &str) -> Option<chrono::NaiveDateTime> {
    let text = text.trim().trim_end_matches('Z');
    TIMESTAMP_FORMATS
        .iter()
        .find_map(|fmt| chrono::NaiveDateTime::parse_from_str(text, fmt).ok())
}
