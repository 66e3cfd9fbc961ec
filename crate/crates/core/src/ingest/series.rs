use super::{CurrentRecord, IngestError, LoadRecord, MeteoRecord, PvRecord, Result};
use chrono::{Duration, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const HOURS_PER_DAY: usize = 24;

pub trait Timestamped {
    fn timestamp(&self) -> NaiveDateTime;
}

impl Timestamped for MeteoRecord {
    fn timestamp(&self) -> NaiveDateTime {
        self.timestamp
    }
}

impl Timestamped for CurrentRecord {
    fn timestamp(&self) -> NaiveDateTime {
        self.timestamp
    }
}

impl Timestamped for PvRecord {
    fn timestamp(&self) -> NaiveDateTime {
        self.timestamp
    }
}

impl Timestamped for LoadRecord {
    fn timestamp(&self) -> NaiveDateTime {
        self.timestamp
    }
}

impl Timestamped for (NaiveDateTime, f64) {
    fn timestamp(&self) -> NaiveDateTime {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    #[default]
    Mean,
    Last,
}

/// Values on a regular one-hour grid starting at `start`. `None` marks an hour without data.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HourlySeries {
    start: Option<NaiveDateTime>,
    values: Vec<Option<f64>>,
}

fn floor_to_hour(ts: NaiveDateTime) -> NaiveDateTime {
    ts.with_minute(0)
        .and_then(|t| t.with_second(0))
        .and_then(|t| t.with_nanosecond(0))
        .expect("zeroing minutes is always valid")
}

impl HourlySeries {
    /// Builds a series from consecutive hourly values. `start` is floored to the hour.
    pub fn from_values(start: NaiveDateTime, values: Vec<Option<f64>>) -> Self {
        Self {
            start: Some(floor_to_hour(start)),
            values,
        }
    }

    pub fn start(&self) -> Option<NaiveDateTime> {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn gap_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// `(timestamp, value)` for every slot, gaps included.
    pub fn iter(&self) -> impl Iterator<Item = (NaiveDateTime, Option<f64>)> + '_ {
        let start = self.start.unwrap_or_default();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (start + Duration::hours(i as i64), *v))
    }

    /// Applies `f` to every present value, keeping gaps.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            start: self.start,
            values: self.values.iter().map(|v| v.map(&f)).collect(),
        }
    }
}

/// Buckets records into clock hours. Records need not be pre-sorted; `Last` picks the latest
/// observation in each hour (file order breaks timestamp ties). Records whose selected field is
/// absent are ignored.
pub fn to_hourly<R: Timestamped>(
    records: &[R],
    select: impl Fn(&R) -> Option<f64>,
    aggregation: Aggregation,
) -> HourlySeries {
    let mut buckets: BTreeMap<NaiveDateTime, (f64, usize, NaiveDateTime, f64)> = BTreeMap::new();
    let mut first: Option<NaiveDateTime> = None;
    let mut last: Option<NaiveDateTime> = None;
    for r in records {
        let ts = r.timestamp();
        let hour = floor_to_hour(ts);
        first = Some(first.map_or(hour, |f| f.min(hour)));
        last = Some(last.map_or(hour, |l| l.max(hour)));
        let Some(v) = select(r) else { continue };
        let entry = buckets.entry(hour).or_insert((0.0, 0, ts, v));
        entry.0 += v;
        entry.1 += 1;
        if ts >= entry.2 {
            entry.2 = ts;
            entry.3 = v;
        }
    }
    let (Some(first), Some(last)) = (first, last) else {
        return HourlySeries::default();
    };
    let n = (last - first).num_hours() as usize + 1;
    let mut values = vec![None; n];
    for (hour, (sum, count, _, latest)) in buckets {
        let idx = (hour - first).num_hours() as usize;
        values[idx] = Some(match aggregation {
            Aggregation::Mean => sum / count as f64,
            Aggregation::Last => latest,
        });
    }
    HourlySeries {
        start: Some(first),
        values,
    }
}

/// Hour-of-day averages of a quantity, with the number of observations behind each.
#[derive(Debug, Clone, PartialEq)]
pub struct TypicalDayProfile {
    pub hour_values: [f64; HOURS_PER_DAY],
    pub sample_counts: [u64; HOURS_PER_DAY],
}

impl TypicalDayProfile {
    /// A profile of known values, each counted as one sample.
    pub fn from_values(hour_values: [f64; HOURS_PER_DAY]) -> Self {
        Self {
            hour_values,
            sample_counts: [1; HOURS_PER_DAY],
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::from_values([value; HOURS_PER_DAY])
    }

    /// Applies `f` hour by hour, keeping the sample counts.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            hour_values: self.hour_values.map(f),
            sample_counts: self.sample_counts,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.sample_counts.iter().all(|&c| c >= 1)
    }

    pub fn to_entry(&self) -> ProfileEntry {
        ProfileEntry {
            hours: self.hour_values.to_vec(),
            samples: self.sample_counts.to_vec(),
        }
    }
}

/// Averages every present value into its hour-of-day bucket.
///
/// Values inside a bucket are summed in sorted order, so the result does not depend on the order
/// of days in the input.
pub fn typical_day(series: &HourlySeries) -> Result<TypicalDayProfile> {
    let mut buckets: [Vec<f64>; HOURS_PER_DAY] = Default::default();
    for (ts, value) in series.iter() {
        if let Some(v) = value {
            buckets[ts.hour() as usize].push(v);
        }
    }
    let missing: Vec<usize> = (0..HOURS_PER_DAY)
        .filter(|&h| buckets[h].is_empty())
        .collect();
    if !missing.is_empty() {
        return Err(IngestError::IncompleteProfile { missing });
    }
    let mut profile = TypicalDayProfile {
        hour_values: [0.0; HOURS_PER_DAY],
        sample_counts: [0; HOURS_PER_DAY],
    };
    for (h, bucket) in buckets.iter_mut().enumerate() {
        bucket.sort_by(f64::total_cmp);
        profile.hour_values[h] = bucket.iter().sum::<f64>() / bucket.len() as f64;
        profile.sample_counts[h] = bucket.len() as u64;
    }
    Ok(profile)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub hours: Vec<f64>,
    pub samples: Vec<u64>,
}

impl ProfileEntry {
    pub fn to_profile(&self) -> Result<TypicalDayProfile> {
        let hour_values: [f64; HOURS_PER_DAY] =
            self.hours.clone().try_into().map_err(|v: Vec<f64>| {
                IngestError::Format(format!("profile has {} hours, expected 24", v.len()))
            })?;
        let sample_counts: [u64; HOURS_PER_DAY] =
            self.samples.clone().try_into().map_err(|v: Vec<u64>| {
                IngestError::Format(format!(
                    "profile has {} sample counts, expected 24",
                    v.len()
                ))
            })?;
        Ok(TypicalDayProfile {
            hour_values,
            sample_counts,
        })
    }
}

/// `{resource_name: {hours: [24 numbers], samples: [24 ints]}}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProfileDocument(pub BTreeMap<String, ProfileEntry>);

impl ProfileDocument {
    pub fn insert(&mut self, name: &str, profile: &TypicalDayProfile) {
        self.0.insert(name.to_string(), profile.to_entry());
    }

    pub fn get(&self, name: &str) -> Option<Result<TypicalDayProfile>> {
        self.0.get(name).map(ProfileEntry::to_profile)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| IngestError::Format(e.to_string()))
    }
}
