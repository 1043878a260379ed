use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itlprove")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn unprovable_formula_yields_six_world_model() {
    let out = run(&["--logic", "", "--format", "json", "box (p -> q) | (r -> s)"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["provable"], false);
    assert_eq!(v["checked"], true);
    assert_eq!(v["model"]["worlds"].as_array().unwrap().len(), 6);
    assert_eq!(v["model"]["R"].as_array().unwrap().len(), 2);
}

#[test]
fn symmetric_frames_prove_converse_interaction() {
    let out = run(&["--logic", "B", "--format", "json", "(bdia p -> dia p) & (p -> box dia p)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["provable"], true);
    assert!(!v["proof"]["nodes"].as_array().unwrap().is_empty());
}

#[test]
fn falsum_is_refuted_by_one_world() {
    let out = run(&["--logic", "", "--format", "json", "false"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["model"]["worlds"].as_array().unwrap().len(), 1);
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(run(&["p &"]).status.code(), Some(2));
    assert_eq!(run(&["--logic", "TT", "p"]).status.code(), Some(2));
    assert_eq!(run(&["--logic", "X", "p"]).status.code(), Some(2));
    assert_eq!(run(&["--oracle-bound", "9", "p"]).status.code(), Some(2));
    assert_eq!(run(&["--sequent", "--oracle-bound", "2", "|- p"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_is_an_error() {
    let out = run(&["--budget", "3", "(~box p & ~bbox q) -> false"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn sequent_mode_and_logic_letters() {
    assert_eq!(run(&["--sequent", "p |- (f)[|-], p"]).status.code(), Some(0));
    assert_eq!(run(&["--logic", "t", "box p -> p"]).status.code(), Some(0));
    assert_eq!(run(&["--logic", "BT", "box p -> p"]).status.code(), Some(0));
    assert_eq!(run(&["--logic", "D", "box p -> dia p"]).status.code(), Some(0));
    assert_eq!(run(&["box p -> dia p"]).status.code(), Some(1));
}

#[test]
fn oracle_cross_check_is_reported() {
    let out = run(&["--format", "json", "--oracle-bound", "2", "p | ~p"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["oracle"]["outcome"], "invalid");
    assert_eq!(v["oracle"]["model"]["worlds"].as_array().unwrap().len(), 2);
    let out = run(&["--format", "json", "--oracle-bound", "2", "p -> p"]);
    assert_eq!(json(&out)["oracle"]["outcome"], "no_countermodel");
}

#[test]
fn dot_and_trace_output() {
    let out = run(&["--format", "dot", "box (p -> q) | (r -> s)"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph model"));
    assert!(dot.contains("style=dotted"));
    let out = run(&["--format", "dot", "p -> p"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("digraph proof"));
    let out = run(&["--trace", "--format", "json", "box (p -> q) | (r -> s)"]);
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 5);
    json(&out);
}
