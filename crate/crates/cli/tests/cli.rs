use serde_json::Value;
use std::process::{Command, Output};

fn bhk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhk")).args(args).env("BHK_MAX_THREADS", "2").output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = bhk(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().expect("exit code"), v)
}

#[test]
fn excluded_middle_is_refuted_with_a_countermodel() {
    let (code, v) = json(&["prove", "p0 \\/ ~p0"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "negative");
    assert!(v["countermodel"]["poset"].is_array());
    assert!(v["countermodel"]["valuation"].is_object());
}

#[test]
fn double_negated_excluded_middle_is_proved() {
    let (code, v) = json(&["prove", "~~(p0 \\/ ~p0)"]);
    assert_eq!(code, 0);
    assert!(v["proof"].is_string());
}

#[test]
fn projections_are_separated_at_two() {
    let (code, v) = json(&["equiv", "--ctx", "u:p0/\\p0", "fst u", "snd u"]);
    assert_eq!(code, 1);
    assert_eq!(v["countermodel"]["assignment"]["p0"], 2);
}

#[test]
fn beta_pair_is_equivalent() {
    let (code, v) = json(&["equiv", "--ctx", "x:p0, y:p1", "fst (x, y)", "x"]);
    assert_eq!(code, 0);
    assert!(v["trace"].as_array().is_some_and(|t| t.len() <= 3));
}

#[test]
fn ackermann_three_three() {
    let out = bhk(&["eval-t", "ack 3 3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "61");
}

#[test]
fn iso_verdicts() {
    assert_eq!(json(&["iso", "p0 /\\ p1", "p1 /\\ p0"]).0, 0);
    let (code, v) = json(&["iso", "p0", "p0 /\\ p0"]);
    assert_eq!(code, 1);
    assert_eq!(v["countermodel"]["kind"], "cardinality");
    let (code, v) = json(&["iso", "~p0 \\/ ~~p0", "T"]);
    assert_eq!(code, 1);
    assert_eq!(v["countermodel"]["kind"], "provability-gap");
}

#[test]
fn machine_runs_and_fuel() {
    let (code, v) = json(&["rec-run", "double", "21"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "42");
    assert_eq!(json(&["rec-run", "loop", "0", "--fuel", "50"]).0, 2);
    let (code, v) = json(&["rec-run", "inc r0;inc r0", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "7");
}

#[test]
fn realize_reports() {
    assert_eq!(json(&["realize", "p0 -> p0"]).0, 0);
    let (code, v) = json(&["realize", "p0 \\/ ~p0", "--bounds", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["provable"], "negative");
}

#[test]
fn extraction_in_both_worlds() {
    let (code, v) = json(&["extract", "forall x:N. exists y:N. y = x + x", "fun x:N => (double x, unit)", "--bounds", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["values"][4][1], "8");
    let (code, v) = json(&[
        "extract",
        "forall x:N. exists y:N. y = S x",
        "inc r0;const r1 0;pair r0 r0 r1",
        "--world",
        "rec",
        "--bounds",
        "3",
    ]);
    assert_eq!(code, 0);
    assert!(v["morphism"]["assembly"].as_str().is_some_and(|s| s.contains("call")));
    let (code, _) = json(&["extract", "forall x:N. exists y:N. y = S x", "fun x:N => (x, unit)", "--bounds", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn model_checks() {
    assert_eq!(json(&["model-check", "kripke", "--bounds", "3"]).0, 0);
    assert_eq!(json(&["model-check", "trees", "--bounds", "2"]).0, 0);
    let (code, v) = json(&["model-check", "beta-eta", "--bounds", "20", "--seed", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v["checked"], 20);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(bhk(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(bhk(&["prove", "p0 \\/"]).status.code(), Some(3));
    assert_eq!(bhk(&["eval-t", "S unit"]).status.code(), Some(3));
    assert_eq!(bhk(&["equiv", "--ctx", "x:p0, y:p1", "x", "y"]).status.code(), Some(3));
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["prove", "((p0 -> p1) -> p0) -> p0", "--json"],
        vec!["iso", "~p0 \\/ ~~p0", "T", "--json"],
        vec!["model-check", "beta-eta", "--bounds", "15", "--seed", "3", "--json"],
    ] {
        assert_eq!(bhk(&args).stdout, bhk(&args).stdout);
    }
}
