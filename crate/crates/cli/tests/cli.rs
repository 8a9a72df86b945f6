use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entropic-cover"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn eval_reports_phi() {
    let out = run(&["eval", "--point", r#"{"re":0.5,"im":0,"p":2,"q":0}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "1");
    let phi = v["phi"].as_array().unwrap();
    assert!((phi[0].as_f64().unwrap() - 2f64.ln()).abs() < 1e-15);
    assert!((phi[1].as_f64().unwrap() + std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn punctures_and_bad_input_exit_2() {
    for args in [
        vec!["eval", "--point", r#"{"re":1,"im":0,"p":0,"q":0}"#],
        vec!["eval", "--point", r#"{"re":0.5,"im":0,"p":1,"q":0}"#],
        vec!["eval", "--point", "not json"],
        vec!["asymptotics", "--a", "1", "--b", "2"],
        vec!["certify", "--target", "lemma2:1,0"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn continuation_around_zero() {
    let path = "[[0.5,0.3],[-0.5,0.5],[-0.5,-0.5],[0.5,-0.3],[0.5,0.3]]";
    let out = run(&[
        "continue",
        "--point",
        r#"{"re":0.5,"im":0.3,"p":0,"q":0}"#,
        "--path",
        path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["end"]["p"], 2);
    assert_eq!(v["end"]["q"], 0);
    assert!(v["deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_4term_passes_and_is_deterministic() {
    let args = [
        "verify-4term",
        "--samples",
        "8",
        "--params-per-sample",
        "20",
        "--seed",
        "7",
    ];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = bin()
        .args(args)
        .env("ENTROPIC_COVER_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["results"].as_array().unwrap().len(), 8);
    let c = run(&[
        "verify-4term",
        "--samples",
        "8",
        "--params-per-sample",
        "20",
        "--seed",
        "8",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_4term_fails_below_float_noise() {
    let out = run(&[
        "verify-4term",
        "--samples",
        "4",
        "--params-per-sample",
        "10",
        "--tolerance",
        "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn alternative_forms_are_reported() {
    let out = run(&[
        "verify-4term",
        "--samples",
        "4",
        "--params-per-sample",
        "10",
        "--forms",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["forms"]["plus-plus"].as_f64().unwrap() < 1e-9);
    assert!(v["forms"]["minus-plus"].as_f64().unwrap() > 1e-3);
}

#[test]
fn certify_kernel_c() {
    let out = run(&["certify", "--target", "kernel-c"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for case in v["cases"].as_array().unwrap() {
        assert_eq!(case["verified"], true);
    }
}

#[test]
fn certify_with_empty_pool_fails() {
    let out = run(&["certify", "--target", "eq2t3", "--pool-spec", "{}"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn asymptotics_writes_to_file() {
    let dir = std::env::temp_dir().join(format!("entropic-cover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("asym.json");
    let out = run(&[
        "asymptotics",
        "--a",
        "2",
        "--b",
        "1",
        "--n",
        "100,1000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n_values"], serde_json::json!([100, 1000]));
    assert!((v["leading_correction"].as_f64().unwrap() - 0.125).abs() < 1e-15);
    std::fs::remove_dir_all(&dir).unwrap();
}
