//! The small-N run the harness bounds were fixed against. Counts in the
//! fixture were recomputed independently (digit sums and reciprocity-based
//! Dedekind sums in plain Python) and agree exactly.

use cfq_core::ensemble::{thm_harness_with, Theorem, T1_PRODUCT_MAX, T4_PRODUCT_MAX};
use serde_json::Value;

const FIXTURE: &str = include_str!("fixtures/calibration_10007.json");

fn frozen(key: &str) -> Vec<(f64, u64)> {
    let v: Value = serde_json::from_str(FIXTURE).unwrap();
    v[key]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["t"].as_f64().unwrap(), r["count"].as_u64().unwrap()))
        .collect()
}

fn counts(theorem: Theorem) -> Vec<(f64, u64)> {
    let r = thm_harness_with(10_007, &theorem, 2).unwrap();
    r.rows.iter().map(|x| (x.t, (x.fraction * r.phi as f64).round() as u64)).collect()
}

#[test]
fn sum_tail_counts_match_fixture() {
    let got = counts(Theorem::T1 { ts: vec![4.0, 8.0, 16.0, 32.0] });
    assert_eq!(got, frozen("T1"));
    assert!(got.iter().all(|(t, c)| t * *c as f64 / 10_006.0 <= T1_PRODUCT_MAX));
}

#[test]
fn max_tail_counts_match_fixture() {
    assert_eq!(counts(Theorem::T2 { ts: vec![2.0, 4.0, 8.0] }), frozen("T2"));
}

#[test]
fn dedekind_tail_counts_match_fixture() {
    let got = counts(Theorem::T4 { ts: vec![4.0, 8.0, 16.0, 32.0] });
    assert_eq!(got, frozen("T4"));
    assert!(got.iter().all(|(t, c)| t * *c as f64 / 10_006.0 <= T4_PRODUCT_MAX));
}
