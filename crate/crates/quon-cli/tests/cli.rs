use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn quon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn check_golden(args: &[&str], name: &str) {
    let o = quon(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), golden(name), "{args:?}");
}

#[test]
fn golden_outputs() {
    check_golden(&["det", "--weight", "1,1,1", "--one-param"], "det_111_one_param.txt");
    check_golden(&["count", "chains", "--n", "6"], "count_chains_6.txt");
    check_golden(&["count", "cnk", "--n", "4"], "count_cnk_4.txt");
    check_golden(&["invert", "--weight", "1,1", "--format", "json"], "invert_11.json");
    check_golden(&["invert", "--n", "3", "--format", "expansion"], "invert_123_expansion.txt");
    check_golden(&["build", "--n", "3", "--format", "json"], "build_123.json");
    check_golden(&["build", "--weight", "2,0,1", "--format", "json"], "build_113.json");
    check_golden(&["zagier-check", "--n", "8", "--one-param", "--coeff", "43218765"], "zagier_8_43218765.txt");
}

#[test]
fn json_is_well_formed() {
    let v: Value = serde_json::from_str(&stdout(&quon(&["build", "--weight", "2,0,1", "--format", "json"]))).unwrap();
    assert_eq!(v["basis"], serde_json::json!(["113", "131", "311"]));
    assert_eq!(v["entries"][0][0], "1 + q11");

    let v: Value = serde_json::from_str(&stdout(&quon(&["det", "--n", "3", "--format", "json"]))).unwrap();
    assert_eq!(v["factors"].as_array().map(Vec::len), Some(4));
}

#[test]
fn determinant_of_two_letters() {
    let o = quon(&["det", "--n", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "(1-q12*q21)");
}

#[test]
fn failed_checks_exit_one() {
    let o = quon(&["zagier-check", "--n", "8", "--mode", "original-conjecture", "--coeff", "43218765"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("NOT polynomial"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["build", "--weight", "1,x"][..],
        &["zagier-check", "--n", "8"],
        &["invert", "--weight", "2,0,1", "--format", "expansion"],
        &["invert", "--n", "2", "--method", "nonsense"],
        &["count", "chains"],
    ] {
        assert_eq!(quon(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["verify", "--suite", "counting", "--max-n", "4"];
    let a = quon(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&quon(&args)));
    assert!(stdout(&a).ends_with("0 failed\n"));
}

#[test]
fn seeded_commands_are_reproducible() {
    let args = ["--seed", "5", "verify", "--suite", "positivity", "--max-n", "3"];
    assert_eq!(stdout(&quon(&args)), stdout(&quon(&args)));
}

#[test]
fn csv_has_a_header_and_one_row_per_word() {
    let out = stdout(&quon(&["build", "--n", "3", "--format", "csv"]));
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn contravariant_and_varchenko_run() {
    assert!(quon(&["contravariant", "--n", "3", "--det"]).status.success());
    let o = quon(&["varchenko", "--n", "3", "--check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}
