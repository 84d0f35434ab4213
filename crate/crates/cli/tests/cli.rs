use std::process::{Command, Output};

use serde_json::Value;

fn cfq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfq")).args(args).env_remove("CFQ_WORKERS").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = cfq(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(stdout(args).trim()).unwrap()
}

#[test]
fn expand_examples() {
    let v = json(&["expand", "10", "7"]);
    assert_eq!(v["digits"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["S"], 6);
    assert_eq!(v["M"], 3);
    assert_eq!(v["D_value"], 0.0);
    assert_eq!(v["convergents"][3], "7/10");
    assert_eq!(json(&["expand", "9", "1"])["digits"], serde_json::json!([9]));
}

#[test]
fn domain_usage_and_limit_exit_codes() {
    assert_eq!(cfq(&["expand", "10", "4"]).status.code(), Some(3));
    assert_eq!(cfq(&["expand", "10"]).status.code(), Some(2));
    assert_eq!(cfq(&["scan", "10", "--stat", "q"]).status.code(), Some(2));
    assert_eq!(cfq(&["--workers", "0", "scan", "10"]).status.code(), Some(2));
    assert_eq!(cfq(&["search", "--min-stat", "s", "--range", "20000000", "20000000"]).status.code(), Some(4));
    assert_eq!(cfq(&["dedekind", "2000000", "1", "--direct"]).status.code(), Some(4));
}

#[test]
fn dedekind_prints_exact_value() {
    let v = json(&["dedekind", "3", "1"]);
    assert_eq!(v["D"], "1/18");
    assert_eq!(json(&["dedekind", "200", "7", "--direct"])["D"], json(&["dedekind", "200", "7"])["D"]);
}

#[test]
fn scan_means() {
    assert_eq!(json(&["scan", "10", "--stat", "s"])["mean_exact"], "8/1");
    assert_eq!(json(&["scan", "2", "--stat", "s"])["mean"], 2.0);
}

#[test]
fn scan_csv_columns() {
    let out = stdout(&["scan", "1009", "--stat", "m", "--t", "0.5,1,2", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("N,phi,stat,mean,variance,tail@0.5,tail@1,tail@2"));
    assert_eq!(lines.next().unwrap().split(',').count(), 8);
    assert_eq!(lines.next(), None);
}

#[test]
fn scan_range_streams_one_line_per_n() {
    let out = stdout(&["scan", "--range", "5", "14", "--stat", "a"]);
    let ns: Vec<u64> = out.lines().map(|l| serde_json::from_str::<Value>(l).unwrap()["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, (5..=14).collect::<Vec<_>>());
}

#[test]
fn search_emits_one_row_per_n() {
    let out = stdout(&["search", "--min-stat", "m", "--range", "2", "100"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("N,argmin,min,bound,margin"));
    assert_eq!(lines.count(), 99);
}

#[test]
fn gk_rows() {
    let out = stdout(&["gk", "10007", "--max-digit", "5", "--format", "csv"]);
    assert_eq!(out.lines().next(), Some("m,count,freq,target,diff"));
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn output_does_not_depend_on_workers() {
    for args in [
        vec!["scan", "200003", "--stat", "d", "--t", "0.5,1", "--two-sided"],
        vec!["search", "--min-stat", "s", "--range", "40000", "40050"],
        vec!["farey", "300", "--law", "vardi"],
        vec!["gk", "100003"],
    ] {
        let one = stdout(&[&["--workers", "1"], &args[..]].concat());
        let many = stdout(&[&["--workers", "6"], &args[..]].concat());
        assert_eq!(one, many, "{args:?}");
    }
}

#[test]
fn workers_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cfq"))
        .args(["scan", "1000"])
        .env("CFQ_WORKERS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_cfq")).args(["scan", "1000"]).env("CFQ_WORKERS", "0").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn writes_to_output_file() {
    let path = std::env::temp_dir().join(format!("cfq-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    assert!(stdout(&["expand", "10", "7", "--output", p]).is_empty());
    let v: Value = serde_json::from_str(std::fs::read_to_string(&path).unwrap().trim()).unwrap();
    assert_eq!(v["S"], 6);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn discrepancy_of_points() {
    let v = json(&["discrepancy", "--points", "1/6,5/6"]);
    assert_eq!(v["extreme"], "2/3");
    assert_eq!(v["star"], "1/3");
    assert_eq!(json(&["discrepancy", "2"])["extreme"], "1/1");
}
