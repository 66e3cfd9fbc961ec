use chrono::{Duration, NaiveDate, NaiveDateTime, Timelike};
use offshore_sizing::ingest::{
    parse_currents, parse_ndbc, parse_pvwatts, to_hourly, typical_day, write_currents, write_ndbc,
    write_pvwatts, Aggregation, CurrentRecord, HourlySeries, IngestError, MeteoRecord, PvRecord,
    PvWattsData, SpeedUnit, PVWATTS_NOMINAL_YEAR,
};
use proptest::collection::vec;
use proptest::prelude::*;
use std::collections::BTreeMap;

fn origin() -> NaiveDateTime {
    NaiveDate::from_ymd_opt(2022, 3, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap()
}

/// Values with two decimals, the precision the buoy files use. Kept below the 99 sentinel.
fn centi(max: i64) -> impl Strategy<Value = f64> {
    (0..max).prop_map(|c| c as f64 / 100.0)
}

fn optional(max: i64) -> impl Strategy<Value = Option<f64>> {
    prop::option::weighted(0.8, centi(max))
}

fn meteo_record() -> impl Strategy<Value = MeteoRecord> {
    (
        0i64..24 * 365,
        0u32..6,
        prop::option::weighted(0.8, 0u32..360),
        optional(4000),
        optional(5000),
        optional(2000),
        optional(3000),
        optional(3000),
        prop::option::weighted(0.5, -3000i64..3000),
    )
        .prop_map(|(h, m10, wdir, wspd, gst, wvht, dpd, apd, atmp)| {
            let mut other = BTreeMap::new();
            if let Some(t) = atmp {
                other.insert("ATMP".to_string(), t as f64 / 100.0);
            }
            MeteoRecord {
                timestamp: origin() + Duration::hours(h) + Duration::minutes(10 * m10 as i64),
                wind_direction: wdir.map(f64::from),
                wind_speed: wspd,
                gust_speed: gst,
                sig_wave_height: wvht,
                dominant_wave_period: dpd,
                average_wave_period: apd,
                other,
            }
        })
}

/// Independent hour-of-day mean: plain sums, no sorting.
fn naive_hour_means(values: &[f64]) -> [f64; 24] {
    let mut sum = [0.0; 24];
    let mut n = [0usize; 24];
    for (i, v) in values.iter().enumerate() {
        sum[i % 24] += v;
        n[i % 24] += 1;
    }
    std::array::from_fn(|h| sum[h] / n[h] as f64)
}

#[test]
fn ndbc_sentinels_become_absent() {
    let text = "#YY  MM DD hh mm WDIR WSPD GST  WVHT   DPD   APD MWD   PRES  ATMP  WTMP  DEWP  VIS PTDY  TIDE\n\
                #yr  mo dy hr mn degT m/s  m/s     m   sec   sec degT   hPa  degC  degC  degC  nmi  hPa    ft\n\
                2022 01 01 00 00 999 99.0 99.0 99.00 99.00 99.00 999 9999.0 999.0 999.0 999.0 99.0 99.00 99.00\n\
                2022 01 01 01 00 MM  MM   MM   MM    MM    MM    MM  MM     MM    MM    MM    MM   MM    MM\n";
    let recs = parse_ndbc(text.as_bytes()).unwrap();
    assert_eq!(recs.len(), 2);
    for r in &recs {
        assert_eq!(r.wind_speed, None);
        assert_eq!(r.sig_wave_height, None);
        assert_eq!(r.dominant_wave_period, None);
        assert!(r.other.is_empty());
    }
}

#[test]
fn ndbc_legacy_layout_without_minutes() {
    let text = "YYYY MM DD hh WD   WSPD GST  WVHT  DPD   APD  MWD  BAR    ATMP  WTMP  DEWP  VIS\n\
                1998 06 01 12 180  7.5  9.0  1.20  8.00  6.10 200  1012.0 15.0  16.0  10.0  99.0\n";
    let recs = parse_ndbc(text.as_bytes()).unwrap();
    assert_eq!(
        recs[0].timestamp,
        NaiveDate::from_ymd_opt(1998, 6, 1)
            .unwrap()
            .and_hms_opt(12, 0, 0)
            .unwrap()
    );
    assert_eq!(recs[0].wind_speed, Some(7.5));
    assert_eq!(recs[0].wind_direction, Some(180.0));
    assert_eq!(recs[0].other.get("PRES"), Some(&1012.0));
    assert!(!recs[0].other.contains_key("VIS"));
}

#[test]
fn ndbc_rejects_missing_wave_height_column() {
    let text = "#YY MM DD hh mm WSPD DPD\n2022 01 01 00 00 5.0 8.0\n";
    assert!(matches!(
        parse_ndbc(text.as_bytes()),
        Err(IngestError::Format(_))
    ));
}

#[test]
fn currents_negative_speed_is_rejected() {
    let text = "Date Time,Speed,Direction\n2022-01-01 00:00,-0.1,10\n";
    assert!(matches!(
        parse_currents(text.as_bytes(), SpeedUnit::MPerS),
        Err(IngestError::Row { line: 2, .. })
    ));
}

#[test]
fn pvwatts_negative_output_is_clamped() {
    let text = "\"DC System Size (kW)\",\"4\"\n\"Month\",\"Day\",\"Hour\",\"AC System Output (W)\"\n1,1,0,-1.5\n1,1,1,2000\n";
    let data = parse_pvwatts(text.as_bytes(), None).unwrap();
    assert_eq!(data.records[0].ac_output, 0.0);
    assert_eq!(data.records[1].ac_output, 2.0);
    assert_eq!(data.system_rating, 4.0);
    assert!(data.diagnostics.iter().any(|d| d.contains("clamped")));
}

#[test]
fn pvwatts_without_rating_is_a_config_error() {
    let text = "\"Month\",\"Day\",\"Hour\",\"AC System Output (W)\"\n1,1,0,0\n";
    assert!(matches!(
        parse_pvwatts(text.as_bytes(), None),
        Err(IngestError::Config(_))
    ));
    assert_eq!(
        parse_pvwatts(text.as_bytes(), Some(4.0))
            .unwrap()
            .system_rating,
        4.0
    );
}

#[test]
fn gap_hours_are_reported_by_index() {
    let mut values = vec![Some(1.0); 72];
    for day in 0..3 {
        values[day * 24 + 7] = None;
    }
    let err = typical_day(&HourlySeries::from_values(origin(), values)).unwrap_err();
    assert_eq!(err, IngestError::IncompleteProfile { missing: vec![7] });
}

proptest! {
    #[test]
    fn typical_day_matches_naive_means(values in vec(-1000i32..1000, 24..=24 * 10)) {
        // Integer-valued samples keep every partial sum exact, so both orders agree bit for bit.
        let whole_days = values.len() / 24 * 24;
        prop_assume!(whole_days >= 24);
        let v: Vec<f64> = values[..whole_days].iter().map(|&x| x as f64).collect();
        let p = typical_day(&HourlySeries::from_values(origin(), v.iter().copied().map(Some).collect())).unwrap();
        prop_assert_eq!(p.hour_values, naive_hour_means(&v));
        prop_assert!(p.sample_counts.iter().all(|&c| c == (whole_days / 24) as u64));
    }

    #[test]
    fn typical_day_invariant_under_day_permutation(
        days in vec(vec(0.0f64..100.0, 24), 1..8),
        seed in any::<u64>(),
    ) {
        let flat = |ds: &[Vec<f64>]| -> Vec<Option<f64>> { ds.iter().flatten().copied().map(Some).collect() };
        let mut shuffled = days.clone();
        // Deterministic Fisher-Yates driven by the seed.
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let a = typical_day(&HourlySeries::from_values(origin(), flat(&days))).unwrap();
        let b = typical_day(&HourlySeries::from_values(origin(), flat(&shuffled))).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn constant_series_gives_constant_profile(c in -1e6f64..1e6, days in 1usize..30) {
        let p = typical_day(&HourlySeries::from_values(origin(), vec![Some(c); days * 24])).unwrap();
        for &v in &p.hour_values {
            prop_assert!((v - c).abs() <= 1e-9 * c.abs().max(1.0));
        }
    }

    #[test]
    fn profile_complete_iff_every_hour_observed(mask in vec(any::<bool>(), 48)) {
        let values: Vec<Option<f64>> = mask.iter().map(|&m| m.then_some(1.0)).collect();
        let expected_missing: Vec<usize> = (0..24).filter(|&h| !mask[h] && !mask[h + 24]).collect();
        match typical_day(&HourlySeries::from_values(origin(), values)) {
            Ok(p) => {
                prop_assert!(expected_missing.is_empty());
                prop_assert!(p.is_complete());
                for h in 0..24 {
                    prop_assert_eq!(p.sample_counts[h], mask[h] as u64 + mask[h + 24] as u64);
                }
            }
            Err(IngestError::IncompleteProfile { missing }) => prop_assert_eq!(missing, expected_missing),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn hourly_mean_matches_bucket_average(samples in vec((0i64..6 * 60, 0i32..1000), 1..200)) {
        let recs: Vec<(NaiveDateTime, f64)> = samples
            .iter()
            .map(|&(m, v)| (origin() + Duration::minutes(m), v as f64))
            .collect();
        let series = to_hourly(&recs, |r| Some(r.1), Aggregation::Mean);
        let first_hour = samples.iter().map(|s| s.0 / 60).min().unwrap();
        for (ts, value) in series.iter() {
            let hour = (ts - origin()).num_hours();
            let bucket: Vec<f64> = samples.iter().filter(|s| s.0 / 60 == hour).map(|s| s.1 as f64).collect();
            prop_assert!(hour >= first_hour);
            if bucket.is_empty() {
                prop_assert_eq!(value, None);
            } else {
                let mean = bucket.iter().sum::<f64>() / bucket.len() as f64;
                prop_assert!((value.unwrap() - mean).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn ndbc_round_trip(records in vec(meteo_record(), 1..40)) {
        let text = write_ndbc(&records);
        let parsed = parse_ndbc(text.as_bytes()).unwrap();
        prop_assert_eq!(parsed, records);
    }

    #[test]
    fn currents_round_trip(
        rows in vec((0i64..10_000, 0u32..300, 0u32..36_000), 1..50),
        unit in prop::sample::select(vec![SpeedUnit::Knots, SpeedUnit::CmPerS, SpeedUnit::MPerS]),
    ) {
        let records: Vec<CurrentRecord> = rows
            .iter()
            .map(|&(m, s, d)| CurrentRecord {
                timestamp: origin() + Duration::minutes(6 * m),
                speed: s as f64 / 100.0,
                direction: d as f64 / 100.0,
            })
            .collect();
        let parsed = parse_currents(write_currents(&records, unit).as_bytes(), unit).unwrap();
        prop_assert_eq!(parsed.len(), records.len());
        for (a, b) in parsed.iter().zip(&records) {
            prop_assert_eq!(a.timestamp, b.timestamp);
            prop_assert!((a.speed - b.speed).abs() <= 1e-12);
            prop_assert_eq!(a.direction, b.direction);
        }
    }

    #[test]
    fn pvwatts_round_trip(watts in vec(0u32..4_000, 1..200)) {
        let start = NaiveDate::from_ymd_opt(PVWATTS_NOMINAL_YEAR, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
        let records: Vec<PvRecord> = watts
            .iter()
            .enumerate()
            .map(|(k, &w)| {
                let ts = start + Duration::hours(k as i64);
                PvRecord {
                    month: chrono::Datelike::month(&ts),
                    day: chrono::Datelike::day(&ts),
                    hour: ts.hour(),
                    timestamp: ts,
                    ac_output: w as f64 / 1000.0,
                    system_rating: 4.0,
                }
            })
            .collect();
        let data = PvWattsData { records, system_rating: 4.0, metadata: vec![], diagnostics: vec![] };
        let parsed = parse_pvwatts(write_pvwatts(&data).as_bytes(), None).unwrap();
        prop_assert_eq!(parsed.system_rating, 4.0);
        prop_assert_eq!(parsed.records.len(), data.records.len());
        for (a, b) in parsed.records.iter().zip(&data.records) {
            prop_assert_eq!(a.timestamp, b.timestamp);
            prop_assert!((a.ac_output - b.ac_output).abs() <= 1e-12);
        }
    }
}
