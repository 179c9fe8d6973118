//! End-to-end runs of the compiled binary: report contents, exit codes,
//! input handling, and byte determinism across worker counts.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sectional"))
}

fn write_input(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

fn report_of(output: &Output) -> Value {
    assert!(!output.stdout.is_empty(), "no report on stdout");
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON document")
}

const DIAG_123: &str = r#"{"dim": 3, "matrix": [[1,0,0],[0,2,0],[0,0,3]]}"#;

#[test]
fn bounds_reports_the_sharp_interval() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(&dir, "form.json", DIAG_123);
    let output =
        binary().args(["bounds", "-i", &input, "--samples", "512"]).output().unwrap();
    assert!(output.status.success());
    let report = report_of(&output);
    assert_eq!(report["command"], "bounds");
    assert_eq!(report["result"]["m"], 2.0);
    assert_eq!(report["result"]["M"], 6.0);
    let oracle_max = report["provenance"]["oracle"]["max"].as_f64().unwrap();
    assert!((oracle_max - 6.0).abs() <= 1e-6);
}

#[test]
fn report_keys_keep_the_documented_order() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(&dir, "form.json", DIAG_123);
    let output =
        binary().args(["bounds", "-i", &input, "--samples", "64"]).output().unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    let positions: Vec<usize> = ["\"command\"", "\"config\"", "\"input\"", "\"result\"", "\"provenance\""]
        .iter()
        .map(|key| text.find(key).unwrap_or_else(|| panic!("missing {key}")))
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
    let m = text.find("\"m\"").unwrap();
    let upper = text.find("\"M\"").unwrap();
    assert!(m < upper);
}

#[test]
fn spectral_solves_in_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(&dir, "form.json", DIAG_123);
    for mode in ["paper", "sweep"] {
        let output =
            binary().args(["spectral", "-i", &input, "--mode", mode]).output().unwrap();
        assert!(output.status.success());
        let report = report_of(&output);
        assert_eq!(report["result"]["mode"], mode);
        assert_eq!(report["config"]["mode"], mode);
        let sorted: Vec<f64> = report["provenance"]["formula"]["sorted_eigenvalues"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect();
        for (value, expected) in sorted.iter().zip([1.0, 2.0, 3.0]) {
            assert!((value - expected).abs() <= 1e-8);
        }
    }
}

#[test]
fn plane_for_hits_the_requested_value() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(&dir, "form.json", DIAG_123);
    let output =
        binary().args(["plane-for", "-i", &input, "--value", "4.0"]).output().unwrap();
    assert!(output.status.success());
    let report = report_of(&output);
    let achieved = report["result"]["achieved"].as_f64().unwrap();
    assert!((achieved - 4.0).abs() <= 4e-8, "{achieved}");
    assert_eq!(report["result"]["plane"].as_array().unwrap().len(), 2);
}

#[test]
fn plane_for_rejects_values_outside_the_range() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(&dir, "form.json", DIAG_123);
    let output =
        binary().args(["plane-for", "-i", &input, "--value", "99"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("outside"));
}

#[test]
fn oracle_accepts_sum_documents() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(
        &dir,
        "sum.json",
        r#"{"dim": 3, "terms": [
            {"coefficient": 1.0, "form": [[1,0,0],[0,1,0],[0,0,0]]},
            {"coefficient": 1.0, "form": [[1,0,0],[0,0,0],[0,0,1]]}
        ]}"#,
    );
    let output =
        binary().args(["oracle", "-i", &input, "--samples", "2048"]).output().unwrap();
    assert!(output.status.success());
    let report = report_of(&output);
    assert_eq!(report["provenance"]["formula"]["sharp"], false);
    let max = report["result"]["max"].as_f64().unwrap();
    assert!(max < 2.0, "inner estimate stays below the outer bound, got {max}");
}

#[test]
fn verify_passes_clean_input_and_flags_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(&dir, "form.json", DIAG_123);
    let output =
        binary().args(["verify", "-i", &input, "--samples", "512"]).output().unwrap();
    assert!(output.status.success());
    let report = report_of(&output);
    assert_eq!(report["result"]["violation"], false);
}

#[test]
fn verify_rejects_asymmetric_matrices_naming_the_pair() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(
        &dir,
        "bad.json",
        r#"{"dim": 2, "matrix": [[1.0, 0.3], [0.0, 1.0]]}"#,
    );
    let output = binary().args(["verify", "-i", &input]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("(0, 1)"), "{stderr}");
}

#[test]
fn malformed_json_exits_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(&dir, "broken.json", "{not json");
    let output = binary().args(["bounds", "-i", &input]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("malformed"));
}

#[test]
fn unknown_subcommands_exit_with_code_one() {
    let output = binary().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn demo_shows_the_unattained_outer_bound() {
    let output = binary().args(["demo", "remark-2-4", "--samples", "2048"]).output().unwrap();
    assert!(output.status.success());
    let report = report_of(&output);
    assert_eq!(report["result"]["outer"][1], 2.0);
    let gap = report["result"]["gap"].as_f64().unwrap();
    assert!(gap > 0.01, "gap {gap}");
    let max = report["provenance"]["oracle"]["max"].as_f64().unwrap();
    assert!(max < 2.0);
}

#[test]
fn realize_measures_back_the_requested_interval() {
    let output = binary()
        .args(["realize", "--interval", "2,6", "--dim", "3", "--samples", "1024"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let report = report_of(&output);
    let range = report["result"]["measured_range"].as_array().unwrap();
    assert!((range[0].as_f64().unwrap() - 2.0).abs() <= 2e-4);
    assert!((range[1].as_f64().unwrap() - 6.0).abs() <= 2e-4);
    assert_eq!(report["config"]["interval"], serde_json::json!([2.0, 6.0]));
}

#[test]
fn realize_rejects_negative_maxima_as_unrealizable() {
    let output = binary()
        .args(["realize", "--interval", "-6,-2", "--dim", "3"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("no realization"));
}

#[test]
fn stdin_input_and_file_output_work() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let mut child = binary()
        .args(["bounds", "-i", "-", "-o", out_path.to_str().unwrap(), "--samples", "64"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.as_mut().unwrap().write_all(DIAG_123.as_bytes()).unwrap();
    let output = child.wait_with_output().unwrap();
    assert!(output.status.success());
    assert!(output.stdout.is_empty(), "report goes to the file, not stdout");
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["result"]["m"], 2.0);
}

#[test]
fn reports_are_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(&dir, "form.json", DIAG_123);
    for command in [
        vec!["bounds", "-i", &input, "--samples", "512", "--seed", "7"],
        vec!["oracle", "-i", &input, "--samples", "512", "--seed", "7"],
        vec!["verify", "-i", &input, "--samples", "512", "--seed", "7"],
    ] {
        let single =
            binary().args(&command).args(["--workers", "1"]).output().unwrap();
        let parallel =
            binary().args(&command).args(["--workers", "4"]).output().unwrap();
        assert!(single.status.success());
        assert_eq!(single.stdout, parallel.stdout, "{command:?}");
    }
}

#[test]
fn invalid_numeric_flags_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(&dir, "form.json", DIAG_123);
    for args in [
        vec!["bounds", "-i", &input, "--samples", "0"],
        vec!["bounds", "-i", &input, "--tol", "0"],
        vec!["bounds", "-i", &input, "--workers", "0"],
    ] {
        let output = binary().args(&args).output().unwrap();
        assert_eq!(output.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn sum_documents_are_rejected_by_single_form_commands() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_input(
        &dir,
        "sum.json",
        r#"{"dim": 2, "terms": [{"coefficient": 1.0, "form": [[1,0],[0,1]]}]}"#,
    );
    let output = binary().args(["bounds", "-i", &input]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("sum-bounds"));
}
