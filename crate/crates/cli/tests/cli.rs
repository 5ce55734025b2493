//! Black-box tests of the command-line interface: exit codes, file formats,
//! and report determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_bigclust")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bigclust-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn synth_fixture(dir: &Path, prefix: &str) {
    let out = run_in(
        dir,
        &[
            "synth",
            "--r",
            "24",
            "--k",
            "3",
            "--n",
            "600",
            "--nu",
            "5",
            "--sep",
            "0.9",
            "--seed",
            "1",
            "--out-prefix",
            prefix,
        ],
    );
    assert!(out.status.success(), "synth failed: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn synth_is_deterministic_and_round_trips() {
    let dir = workdir("roundtrip");
    synth_fixture(&dir, "a");
    synth_fixture(&dir, "b");
    for suffix in ["_data.csv", "_labels.csv", "_btrue.json"] {
        let a = std::fs::read(dir.join(format!("a{suffix}"))).unwrap();
        let b = std::fs::read(dir.join(format!("b{suffix}"))).unwrap();
        assert_eq!(a, b, "{suffix} differs between identical synth runs");
    }

    let out = run_in(
        &dir,
        &[
            "cluster", "--input", "a_data.csv", "--returns", "--k", "3", "--truth",
            "a_labels.csv", "--seed", "3", "--out", "report.json",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert!(report["metrics"]["ari"].as_f64().unwrap() >= 0.9);
    assert_eq!(report["labels"].as_array().unwrap().len(), 24);
}

#[test]
fn cluster_reports_are_byte_identical_modulo_timing() {
    let dir = workdir("determinism");
    synth_fixture(&dir, "s");
    for name in ["r1.json", "r2.json"] {
        let out = run_in(
            &dir,
            &[
                "cluster", "--input", "s_data.csv", "--returns", "--k", "3", "--seed", "9",
                "--init", "normal", "--out", name,
            ],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let mut a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("r1.json")).unwrap()).unwrap();
    let mut b: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("r2.json")).unwrap()).unwrap();
    a["timing_ms"] = 0.into();
    b["timing_ms"] = 0.into();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn exit_codes_match_the_contract() {
    let dir = workdir("exits");
    synth_fixture(&dir, "s");

    // bad arguments
    let out = run_in(&dir, &["cluster", "--input", "s_data.csv", "--k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run_in(&dir, &["synth", "--r", "9", "--k", "3", "--n", "5", "--sep", "0.2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run_in(&dir, &["cluster", "--k", "3"]);
    assert_eq!(out.status.code(), Some(1), "missing --input is an argument error");

    // data errors
    let out = run_in(&dir, &["cluster", "--input", "absent.csv", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(dir.join("neg.csv"), "a,b\n1.0,2.0\n-1.0,2.0\n").unwrap();
    let out = run_in(&dir, &["cluster", "--input", "neg.csv", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2), "negative price must be a data error");

    // help is not an error
    let out = run_in(&dir, &["cluster", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    let help = String::from_utf8_lossy(&out.stdout);
    for flag in [
        "--input", "--returns", "--k", "--nu", "--fit-nu", "--rho", "--mu", "--eta",
        "--inner-iters", "--max-iter", "--tol", "--init", "--seed", "--truth", "--out",
        "--dot", "--threshold",
    ] {
        assert!(help.contains(flag), "help missing {flag}");
    }
}

#[test]
fn dot_output_respects_threshold() {
    let dir = workdir("dot");
    synth_fixture(&dir, "s");
    let out = run_in(
        &dir,
        &[
            "cluster", "--input", "s_data.csv", "--returns", "--k", "3", "--seed", "5",
            "--out", "r.json", "--dot", "g.dot", "--threshold", "0.5",
        ],
    );
    assert!(out.status.success());
    let dot = std::fs::read_to_string(dir.join("g.dot")).unwrap();
    assert!(dot.starts_with("graph clusters {"));
    assert!(dot.trim_end().ends_with('}'));
    let edges: Vec<&str> = dot.lines().filter(|l| l.contains("--")).collect();
    assert!(!edges.is_empty());
    for edge in edges {
        let weight: f64 = edge
            .split("weight=")
            .nth(1)
            .and_then(|s| s.split(']').next())
            .unwrap()
            .parse()
            .unwrap();
        assert!(weight > 0.5, "edge under threshold: {edge}");
    }
}

#[test]
fn eval_reports_null_metrics_with_reasons() {
    let dir = workdir("eval");
    synth_fixture(&dir, "s");
    let out = run_in(
        &dir,
        &["eval", "--labels", "s_labels.csv", "--truth", "s_labels.csv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let eval: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(eval["metrics"]["acc"].as_f64(), Some(1.0));
    assert_eq!(eval["metrics"]["purity"].as_f64(), Some(1.0));
    assert_eq!(eval["metrics"]["ari"].as_f64(), Some(1.0));
    assert!(eval["metrics"]["mod"].is_null());
    assert_eq!(eval["reasons"]["mod"].as_str(), Some("no graph provided"));
    assert!(eval["metrics"]["chi"].is_null());
    assert_eq!(eval["reasons"]["chi"].as_str(), Some("no data provided"));

    // with the graph and the data both metrics appear
    let out = run_in(
        &dir,
        &[
            "eval", "--labels", "s_labels.csv", "--truth", "s_labels.csv", "--b",
            "s_btrue.json", "--input", "s_data.csv", "--returns",
        ],
    );
    assert!(out.status.success());
    let eval: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(eval["metrics"]["mod"].as_f64().is_some());
    assert!(eval["metrics"]["chi"].as_f64().is_some());
    assert!(eval["reasons"].as_object().unwrap().is_empty());
}

#[test]
fn eval_accepts_report_as_prediction_source() {
    let dir = workdir("evalreport");
    synth_fixture(&dir, "s");
    let out = run_in(
        &dir,
        &[
            "cluster", "--input", "s_data.csv", "--returns", "--k", "3", "--seed", "2",
            "--out", "r.json",
        ],
    );
    assert!(out.status.success());
    let out = run_in(&dir, &["eval", "--report", "r.json", "--truth", "s_labels.csv"]);
    assert!(out.status.success());
    let eval: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(eval["metrics"]["ari"].as_f64().unwrap() >= 0.9);
}

#[test]
fn cluster_without_truth_leaves_supervised_metrics_null() {
    let dir = workdir("notruth");
    synth_fixture(&dir, "s");
    let out = run_in(
        &dir,
        &["cluster", "--input", "s_data.csv", "--returns", "--k", "3", "--seed", "4"],
    );
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["metrics"]["acc"].is_null());
    assert!(report["metrics"]["ari"].is_null());
    assert!(report["metrics"]["mod"].as_f64().is_some());
    assert!(report["metrics"]["chi"].as_f64().is_some());
}

#[test]
fn explicit_steps_and_given_nu_are_honored() {
    let dir = workdir("steps");
    synth_fixture(&dir, "s");
    let out = run_in(
        &dir,
        &[
            "cluster", "--input", "s_data.csv", "--returns", "--k", "3", "--nu", "5",
            "--mu", "0.002", "--eta", "0.01", "--rho", "2", "--seed", "1",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["nu"].as_f64(), Some(5.0));
    assert_eq!(report["config"]["nu_source"].as_str(), Some("given"));
    assert_eq!(report["config"]["mu"].as_f64(), Some(0.002));
    assert_eq!(report["config"]["eta"].as_f64(), Some(0.01));
    assert_eq!(report["config"]["rho"].as_f64(), Some(2.0));

    // rejected values are argument errors
    let out = run_in(
        &dir,
        &["cluster", "--input", "s_data.csv", "--returns", "--k", "3", "--mu", "-1"],
    );
    assert_eq!(out.status.code(), Some(1));
    let out = run_in(
        &dir,
        &["cluster", "--input", "s_data.csv", "--returns", "--k", "3", "--nu", "1.5"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_renders_hand_derived_values_exactly() {
    let dir = workdir("handvals");
    std::fs::write(dir.join("truth.csv"), "label\n0\n0\n1\n1\n").unwrap();
    std::fs::write(dir.join("pred.csv"), "label\n0\n1\n0\n1\n").unwrap();
    let out = run_in(&dir, &["eval", "--labels", "pred.csv", "--truth", "truth.csv"]);
    assert!(out.status.success());
    let body = String::from_utf8(out.stdout).unwrap();
    assert!(body.contains("\"ari\": -0.5"), "{body}");
    assert!(body.contains("\"acc\": 0.5"), "{body}");
    assert!(body.contains("\"purity\": 0.5"), "{body}");
}

#[test]
fn eval_label_length_mismatch_is_a_data_error() {
    let dir = workdir("lenmismatch");
    std::fs::write(dir.join("truth.csv"), "label\n0\n1\n").unwrap();
    std::fs::write(dir.join("pred.csv"), "label\n0\n1\n0\n").unwrap();
    let out = run_in(&dir, &["eval", "--labels", "pred.csv", "--truth", "truth.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn nu_flag_conflicts_with_fit_nu() {
    let dir = workdir("nuconflict");
    synth_fixture(&dir, "s");
    let out = run_in(
        &dir,
        &[
            "cluster", "--input", "s_data.csv", "--returns", "--k", "3", "--nu", "5",
            "--fit-nu",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}
