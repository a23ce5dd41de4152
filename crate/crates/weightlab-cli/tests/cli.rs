use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weightlab")).args(args).output().expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn count_sl2_3_matches_oracle() {
    let out = run(&["count", "--n", "2", "--q", "3", "--group", "sl", "--ell", "2", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!((v["ibr"].as_u64(), v["alp"].as_u64(), v["oracle"].as_u64()), (Some(3), Some(3), Some(3)));
}

#[test]
fn count_gl_and_tsv() {
    let gl = run(&["count", "--n", "2", "--q", "3", "--group", "gl", "--ell", "2"]);
    assert_eq!(json_lines(&gl)[0]["ibr"], 2);
    let out = run(&["--format", "tsv", "count", "--n", "2", "--q", "2", "--group", "gu", "--ell", "3", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let row: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let ibr = header.iter().position(|h| *h == "ibr").unwrap();
    assert_eq!(row[ibr], "2");
}

#[test]
fn labels_are_paired() {
    let out = run(&["labels", "--n", "2", "--q", "3", "--group", "gl", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_lines(&out);
    assert_eq!(rows.iter().filter(|r| r["kind"] == "ibr").count(), 2);
    assert_eq!(rows.iter().filter(|r| r["kind"] == "alp").count(), 2);
}

#[test]
fn radical_shape_data() {
    let out = run(&["radical", "--ell", "5", "--q", "11", "--m", "1", "--alpha", "0", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = &json_lines(&out)[0];
    assert_eq!(v["special"], true);
    assert_eq!(v["splitting"], 5);
    let out = run(&["radical", "--ell", "3", "--q", "4", "--m", "1", "--alpha", "1", "--gamma", "0"]);
    assert_eq!(json_lines(&out)[0]["special"], false);
}

#[test]
fn verify_and_tamper_exit_codes() {
    let ok = run(&["verify-section3"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["verify-section3", "--tamper", "vandermonde-sign"]);
    assert_eq!(bad.status.code(), Some(1));
    let summary = json_lines(&bad).pop().unwrap();
    assert_eq!(summary["pass"], false);
}

#[test]
fn bruteforce_commands() {
    let out = run(&["bruteforce", "classes", "--n", "2", "--q", "3", "--group", "gl"]);
    assert_eq!(json_lines(&out).pop().unwrap()["classes"], 8);
    let out = run(&["bruteforce", "radical", "--n", "2", "--q", "3", "--group", "gl", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(run(&["count", "--n", "2", "--q", "6", "--group", "gl", "--ell", "2"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--n", "2", "--q", "3", "--group", "gl", "--ell", "3"]).status.code(), Some(2));
    assert_eq!(run(&["radical", "--ell", "2", "--q", "3", "--kind", "bogus", "--m", "1"]).status.code(), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_weightlab"))
        .args(["bruteforce", "radical", "--n", "2", "--q", "3", "--group", "gl", "--ell", "2"])
        .env("WEIGHTLAB_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
}
