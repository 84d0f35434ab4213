// Prints the small-N calibration run used to freeze the harness bounds.
use cfq_core::ensemble::{thm_harness_with, Theorem};

fn main() {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_007);
    let runs = [
        Theorem::T1 { ts: vec![4.0, 8.0, 16.0, 32.0] },
        Theorem::T2 { ts: vec![2.0, 4.0, 8.0] },
        Theorem::T4 { ts: vec![4.0, 8.0, 16.0, 32.0] },
    ];
    let reports: Vec<_> = runs.iter().map(|t| thm_harness_with(n, t, 1).unwrap()).collect();
    println!("{}", serde_json::to_string_pretty(&reports).unwrap());
}
