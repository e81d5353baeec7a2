use crystalft_cli::record::{read_records, write_records, Format, ResultRecord, COLUMNS};
use proptest::prelude::*;

fn record(i: u64) -> ResultRecord {
    ResultRecord {
        lattice: "pcu".into(),
        l: 4 + 2 * i as usize,
        p_z: 0.001 * i as f64,
        p_x: 0.0,
        p_m: 1.0 / 3.0,
        trials: 1000,
        failures: 10 * i,
        rate: 0.01 * i as f64,
        ci_lo: 0.0,
        ci_hi: 0.1,
        seed: u64::MAX - i,
        version: "0.1.0".into(),
        timestamp: "2026-01-01T00:00:00Z".into(),
    }
}

#[test]
fn three_records_four_lines() {
    let recs: Vec<_> = (0..3).map(record).collect();
    let mut buf = Vec::new();
    write_records(&recs, Format::Csv, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
}

#[test]
fn json_objects_share_ordered_keys() {
    let recs: Vec<_> = (0..3).map(record).collect();
    let mut buf = Vec::new();
    write_records(&recs, Format::Json, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    // Key order is the column order in every object.
    let mut last = 0;
    for c in COLUMNS {
        let pos = text[last..].find(&format!("\"{c}\":")).map(|p| p + last).unwrap();
        assert!(pos >= last);
        last = pos;
    }
    for obj in v.as_array().unwrap() {
        let keys: Vec<&String> = obj.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), COLUMNS.len());
    }
}

fn arb_record() -> impl Strategy<Value = ResultRecord> {
    let rate = -1e300..1e300f64;
    (
        "[a-z0-9 ,\"]{0,8}",
        2usize..100,
        (rate.clone(), rate.clone(), rate.clone(), rate.clone(), rate.clone(), rate),
        any::<u64>(),
        any::<u64>(),
        any::<u64>(),
        "[0-9TZ:.-]{0,25}",
    )
        .prop_map(|(lattice, l, (p_z, p_x, p_m, rate, ci_lo, ci_hi), trials, failures, seed, timestamp)| ResultRecord {
            lattice,
            l,
            p_z,
            p_x,
            p_m,
            trials,
            failures,
            rate,
            ci_lo,
            ci_hi,
            seed,
            version: "0.1.0".into(),
            timestamp,
        })
}

proptest! {
    #[test]
    fn csv_json_round_trip(recs in prop::collection::vec(arb_record(), 0..6)) {
        let mut csv = Vec::new();
        write_records(&recs, Format::Csv, &mut csv).unwrap();
        let from_csv = read_records(Format::Csv, csv.as_slice()).unwrap();
        prop_assert_eq!(&from_csv, &recs);
        let mut json = Vec::new();
        write_records(&from_csv, Format::Json, &mut json).unwrap();
        let from_json = read_records(Format::Json, json.as_slice()).unwrap();
        prop_assert_eq!(&from_json, &recs);
        let mut again = Vec::new();
        write_records(&from_json, Format::Csv, &mut again).unwrap();
        prop_assert_eq!(again, csv);
    }
}
