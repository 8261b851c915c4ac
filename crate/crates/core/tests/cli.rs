//! End-to-end tests of the `fundim` binary: envelopes, exit codes and file handling.

use std::path::Path;
use std::process::{Command, Output};

use fundim::network::Network;
use fundim::scalar::Rational;
use serde_json::Value;

const S0: &str = "1,-1,-1,2,1,1,0";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fundim")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_s0(dir: &Path) -> String {
    let net = Network::<Rational>::from_ints(&[1, 2, 1], &[1, -1, -1, 2, 1, 1, 0]).unwrap();
    let path = dir.join("s0.json");
    std::fs::write(&path, net.to_json_string()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn dim_of_saved_network_is_five() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_s0(dir.path());
    let v = json(&run(&["dim", "--net", &path, "--strategy", "decisive"]));
    assert_eq!(v["result"]["value"], 5);
    assert_eq!(v["backend"], "exact");
    assert_eq!(v["config"]["input"], path.as_str());
    assert_eq!(v["config"]["scalar_mode"], "rational");
}

#[test]
fn eval_inline_network() {
    let v = json(&run(&["eval", "--widths", "1,2,1", "--params", S0, "--x", "3", "--x", "5"]));
    assert_eq!(v["result"]["outputs"], serde_json::json!([["2"], ["4"]]));
}

#[test]
fn ones_chain_experiment_caps_at_four() {
    let v = json(&run(&["experiment", "ones-chain", "--len", "6", "--trials", "20", "--seed", "0"]));
    assert_eq!(v["result"]["summary"]["max"], 4);
    assert_eq!(v["result"]["verdict"], "confirmed");
    let again = json(&run(&["experiment", "ones-chain", "--len", "6", "--trials", "20", "--seed", "0"]));
    assert_eq!(v["result"], again["result"]);
}

#[test]
fn malformed_json_is_usage_error_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"widths\": [1, 1,\n").unwrap();
    let out = run(&["dim", "--net", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn float_file_rejected_in_rational_mode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let arch = fundim::Architecture::new(vec![1, 1]).unwrap();
    let net = Network::<f64>::from_flat(arch, vec![0.5, 0.25]).unwrap();
    std::fs::write(&path, net.to_json_string()).unwrap();
    let out = run(&["dim", "--net", path.to_str().unwrap(), "--mode", "rational"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn non_ordinary_network_is_analysis_error() {
    let out = run(&["dim", "--widths", "1,1,1", "--params", "0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-ordinary"));
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(run(&["dim", "--bogus"]).status.code(), Some(1));
}

#[test]
fn demo_passes() {
    let out = run(&["demo"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn output_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_s0(dir.path());
    let out_path = dir.path().join("jac.csv");
    let out = run(&[
        "jacobian",
        "--net",
        &path,
        "--x",
        "0",
        "--x",
        "3",
        "--format",
        "csv",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config:"));
    assert!(lines.next().unwrap().contains("A1[0,0]"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn saved_network_round_trips_through_the_binary() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_s0(dir.path());
    let from_file = json(&run(&["eval", "--net", &path, "--x", "7/2"]));
    let inline = json(&run(&["eval", "--widths", "1,2,1", "--params", S0, "--x", "7/2"]));
    assert_eq!(from_file["result"], inline["result"]);
    let text = std::fs::read_to_string(&path).unwrap();
    let loaded = Network::<Rational>::from_json_str(&text).unwrap();
    assert_eq!(loaded.to_json_string(), text);
}
