use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mixshape"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn mixshape");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(args: &[&str], stdin: &str) -> Value {
    let out = run(args, stdin);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const ST: &str = r#"{"dim": 2, "matrices": [[[0, -1], [1, 0]], [[0, -1], [1, -1]]]}"#;

#[test]
fn st_is_not_mixing_with_golden_certificate() {
    let r = report(&["mixing-set"], ST);
    assert_eq!(r["command"], "mixing-set");
    assert_eq!(r["verdict"]["verdict"], "NotMixing");
    assert_eq!(r["verdict"]["exponent"], 12);
    assert_eq!(r["verdict"]["witness"], json!([["1", "0"], ["-1", "0"]]));
}

#[test]
fn certificates_round_trip() {
    let cert = run(&["mixing-set"], ST);
    let r = report(&["verify-cert"], &String::from_utf8(cert.stdout).unwrap());
    assert_eq!(r["valid"], true);
}

#[test]
fn perturbed_certificate_is_rejected() {
    let mut cert = report(&["mixing-set"], ST);
    cert["verdict"]["witness"] = json!([["1", "1"], ["-1", "0"]]);
    let r = report(&["verify-cert"], &cert.to_string());
    assert_eq!(r["valid"], false);
}

#[test]
fn output_is_reproducible() {
    let mc = r#"{"matrices": [[[2, 1], [1, 1]], [[5, 3], [3, 2]]],
        "options": {"boxes": [[["0", "1/2"], ["0", "1/2"]], [["0", "1/2"], ["0", "1/2"]]], "samples": 20000}}"#;
    for (args, input) in [
        (&["mixing-set"][..], ST),
        (&["limit"][..], r#"{"matrices": [[[1]], [[-1]]], "options": {"functions": [[1], [1]]}}"#),
        (&["oracle-mc", "--seed", "9", "--horizon", "4"][..], mc),
        (&["oracle-search", "--height", "1", "--horizon", "24"][..], ST),
    ] {
        let a = run(args, input);
        let b = run(args, input);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn mc_estimate_is_close_to_product() {
    let mc = r#"{"matrices": [[[2, 1], [1, 1]], [[5, 3], [3, 2]]],
        "options": {"boxes": [[["0", "1/2"], ["0", "1/2"]], [["0", "1/2"], ["0", "1/2"]]], "samples": 100000}}"#;
    let r = report(&["oracle-mc", "--seed", "1", "--horizon", "10"], mc);
    let est = r["estimate"]["estimate"].as_f64().unwrap();
    assert!((est - 0.0625).abs() < 0.01, "{est}");
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(run(&["ergodic"], "x").status.code(), Some(2));
    assert_eq!(run(&["ergodic"], r#"{"matrices": [[[1, 2], [3]]]}"#).status.code(), Some(2));
    assert_eq!(run(&["limit"], r#"{"matrices": [[[2]]]}"#).status.code(), Some(2));
}

#[test]
fn contract_violations_exit_3() {
    assert_eq!(run(&["ergodic"], r#"{"matrices": [[[1, 2], [2, 4]]]}"#).status.code(), Some(3));
    assert_eq!(run(&["ergodic"], r#"{"dim": 3, "matrices": [[[2, 1], [1, 1]]]}"#).status.code(), Some(3));
}

#[test]
fn fibonacci_is_ergodic() {
    let r = report(&["ergodic"], r#"{"matrices": [[[1, 1], [1, 0]]]}"#);
    assert_eq!(r["all_ergodic"], true);
}

#[test]
fn limits_along_residues() {
    let r = report(&["limit"], r#"{"matrices": [[[1]], [[-1]]], "options": {"functions": [[1], [1]]}}"#);
    assert_eq!(r["modulus"]["modulus"], 2);
    assert_eq!(r["limits"][0]["value"], json!({"re": "0", "im": "0"}));
    assert_eq!(r["limits"][1]["value"], json!({"re": "1", "im": "0"}));
}

#[test]
fn generated_examples_feed_back_in() {
    let gen = run(&["gen-example"], r#"{"options": {"family": {"kind": "unipotent-sharp", "d": 2, "s": 3}}}"#);
    assert!(gen.status.success());
    let r = report(&["mixing-set"], &String::from_utf8(gen.stdout).unwrap());
    assert_eq!(r["verdict"]["verdict"], "NotMixing");
}

#[test]
fn timing_is_opt_in() {
    assert!(report(&["ergodic"], ST).get("elapsed_ms").is_none());
    assert!(report(&["ergodic", "--timing"], ST)["elapsed_ms"].is_u64());
}
