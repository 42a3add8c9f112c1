use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qkdsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkdsec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn machine(args: &[&str]) -> Value {
    let mut all = vec!["--machine"];
    all.extend_from_slice(args);
    let out = qkdsec(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qkdsec-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn rerun(report: &Value) -> Value {
    let argv: Vec<String> = serde_json::from_value(report["argv"].clone()).unwrap();
    let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
    machine(&argv)
}

#[test]
fn bounds_worked_example() {
    let r = machine(&["bounds", "--eps-bar", "1e-6", "--key-len", "10000"]);
    let o = &r["outputs"];
    assert!((o["markov_bound_log10"].as_f64().unwrap() + 2.0).abs() < 1e-9);
    assert!((o["leaked_bits"].as_f64().unwrap() - 1505.0).abs() < 1.0);
    assert!((o["yuen_bound_log10"].as_f64().unwrap() + 6.0).abs() < 1e-9);
    assert_eq!(rerun(&r), r);
}

#[test]
fn bounds_with_zero_distance() {
    let r = machine(&["bounds", "--eps-bar", "0", "--key-len", "8"]);
    assert_eq!(r["outputs"]["yuen_bound_log2"], -8.0);
}

#[test]
fn pipeline_efficiency_flags() {
    let r = machine(&[
        "bounds",
        "--eps-bar",
        "1e-6",
        "--key-len",
        "10000",
        "--raw-rate",
        "5e10",
        "--key-rate",
        "3e5",
    ]);
    assert_eq!(r["outputs"]["pipeline_efficiency"], 6e-6);
    assert_eq!(r["outputs"]["key_exceeds_raw"], false);
}

#[test]
fn coupling_of_two_files() {
    let p = scratch("p.json", r#"{"outcome_bits": 1, "masses": [0.5, 0.5]}"#);
    let q = scratch("q.json", r#"{"outcome_bits": 1, "masses": [0.75, 0.25]}"#);
    let r = machine(&[
        "coupling",
        "--p",
        p.to_str().unwrap(),
        "--q",
        q.to_str().unwrap(),
    ]);
    for key in ["delta", "maximal_mismatch", "oracle_min_mismatch"] {
        assert_eq!(r["outputs"][key], 0.25, "{key}");
    }
    assert_eq!(rerun(&r), r);
}

#[test]
fn coupling_against_uniform() {
    let p = scratch(
        "k.json",
        r#"{"outcome_bits": 4, "spike": {"outcome": "1010", "epsilon": 0.5}}"#,
    );
    let r = machine(&["coupling", "--p", p.to_str().unwrap()]);
    assert_eq!(r["outputs"]["independent_failure"], 0.9375);
    assert_eq!(r["outputs"]["delta_to_uniform"], 0.5 * (1.0 - 1.0 / 16.0));
}

#[test]
fn detect_orthogonal_qubits() {
    let rho = scratch("rho.txt", "2\n1 0 0 0\n0 0 0 0\n");
    let sigma = scratch("sigma.txt", "# |1><1|\n2\n0 0 0 0\n0 0 1 0\n");
    let povm = scratch("z.txt", "2\n1 0 0 0\n0 0 0 0\n2\n0 0 0 0\n0 0 1 0\n");
    let r = machine(&[
        "detect",
        "--rho",
        rho.to_str().unwrap(),
        "--sigma",
        sigma.to_str().unwrap(),
        "--povm",
        povm.to_str().unwrap(),
    ]);
    let o = &r["outputs"];
    assert_eq!(o["trace_distance"], 1.0);
    assert_eq!(o["helstrom_error"], 0.0);
    assert_eq!(o["measured_distance"], 1.0);
    assert_eq!(rerun(&r), r);
}

#[test]
fn attack_subcommands() {
    let r = machine(&["attack", "otp", "--x", "1010", "--k", "0110"]);
    assert_eq!(r["outputs"]["c"], "1100");

    let r = machine(&[
        "attack",
        "toeplitz",
        "--k",
        "101",
        "--seed",
        "0110",
        "--out-len",
        "2",
    ]);
    assert_eq!(r["outputs"]["hash"], "11");

    let pk = scratch(
        "pk.json",
        r#"{"outcome_bits": 8, "spike": {"outcome": "11001010", "epsilon": 0.0625}}"#,
    );
    let r = machine(&[
        "attack",
        "kpa",
        "--pk",
        pk.to_str().unwrap(),
        "--prefix",
        "1100",
    ]);
    assert_eq!(r["outputs"]["map_guess"], "1010");
    assert_eq!(rerun(&r), r);

    let px = scratch(
        "px.json",
        r#"{"outcome_bits": 8, "spike": {"outcome": "00000000", "epsilon": 0}}"#,
    );
    let r = machine(&[
        "attack",
        "cipher",
        "--c",
        "00000000",
        "--px",
        px.to_str().unwrap(),
        "--pk",
        pk.to_str().unwrap(),
    ]);
    let s = r["outputs"]["avg_success"].as_f64().unwrap();
    assert!((s - (0.0625 + 0.9375 / 256.0)).abs() < 1e-15);
}

#[test]
fn rngtest_report() {
    let r = machine(&[
        "rngtest",
        "--bias",
        "-1e-4",
        "--block-len",
        "1",
        "--count",
        "3",
        "--seed",
        "9",
    ]);
    let o = &r["outputs"];
    assert_eq!(o["exactly_uniform"], false);
    assert_eq!(o["independent_failure"], 0.5);
    assert_eq!(o["model_delta"], 1e-4);
    assert_eq!(rerun(&r), r);
}

#[test]
fn rate_solver_and_no_solution() {
    let r = machine(&[
        "rate",
        "--n",
        "10000000",
        "--s-target",
        "1e-14",
        "--mu",
        "0.005",
    ]);
    let rate = r["outputs"]["rate"].as_f64().unwrap();
    assert!((1e-2..1.0).contains(&rate));
    assert_eq!(rerun(&r), r);

    let out = qkdsec(&["rate", "--n", "100", "--s-target", "1", "--qber", "0.2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no solution"));
}

#[test]
fn validation_errors_exit_with_two() {
    for args in [
        vec!["bounds", "--eps-bar", "2", "--key-len", "8"],
        vec![
            "bounds",
            "--eps-bar",
            "0.1",
            "--key-len",
            "8",
            "--bogus",
            "1",
        ],
        vec!["coupling", "--p", "/nonexistent/p.json"],
        vec!["attack", "otp", "--x", "10", "--k", "1"],
        vec!["rngtest", "--bias", "0.7"],
    ] {
        let out = qkdsec(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let bad = scratch("bad.json", r#"{"outcome_bits": 1, "masses": [0.5, 0.6]}"#);
    let out = qkdsec(&["coupling", "--p", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum"));
}

#[test]
fn paper_figures_table() {
    let r = machine(&["paper-figures"]);
    let o = &r["outputs"];
    assert_eq!(o["pipeline_efficiency"], 6e-6);
    assert!(o.get("uniform_key_guessing").is_none());
    assert_eq!(o["rate_table"].as_array().unwrap().len(), 4);
}

#[test]
fn text_mode_is_key_value_lines() {
    let out = qkdsec(&["bounds", "--eps-bar", "1e-6", "--key-len", "10000"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.contains(" = ")));
    assert!(text.contains("markov_bound_log10 = -2"));
}
