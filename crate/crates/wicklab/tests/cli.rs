//! End-to-end checks of the `wicklab` binary: pinned output formats, report
//! files, config precedence and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn wicklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wicklab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("wicklab-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn transform_wick_matches_pinned_output() {
    let out = wicklab(&["transform", "wick", "--symbol", "1*z^[1]*zbar^[1]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1*z^[1]*zbar^[1] + 1");
}

#[test]
fn transform_round_trip_through_cli_text() {
    let wick = wicklab(&["transform", "wick", "--symbol", "1*z^[2]*zbar^[2]"]);
    let back = wicklab(&["transform", "antiwick", "--symbol", stdout(&wick).trim()]);
    assert_eq!(stdout(&back).trim(), "1*z^[2]*zbar^[2]");
}

#[test]
fn compose_witness_case() {
    let out = wicklab(&["compose", "--b", "1*z^[1]", "--a", "1*zbar^[1]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1*z^[1]*zbar^[1] + -1");
}

#[test]
fn experiment_writes_json_report() {
    let path = temp_path("hs.json");
    let out = wicklab(&[
        "experiment",
        "hs-bound",
        "--rho",
        "0.5",
        "--n",
        "1..3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["experiment"], "hs-bound");
    assert_eq!(report["rows"].as_array().unwrap().len(), 3);
    for row in report["rows"].as_array().unwrap() {
        assert!(row["pass"].as_bool().unwrap());
        assert!(row["measured"].as_f64().is_some());
        assert!(row["bound"].as_f64().is_some());
    }
    assert!(report["meta"]["seed"].as_u64().is_some());
    assert!(report["meta"]["runtime_s"].as_f64().is_some());
}

#[test]
fn experiment_csv_format() {
    let out = wicklab(&["experiment", "zones", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,measured,bound,pass\n"), "{text}");
}

#[test]
fn config_file_with_flag_precedence() {
    let path = temp_path("cfg.json");
    std::fs::write(&path, r#"{"schema":1, "experiment":"hs-bound", "rho":0.5, "n":"1..2"}"#)
        .unwrap();
    let out = wicklab(&[
        "experiment",
        "hs-bound",
        "--config",
        path.to_str().unwrap(),
        "--rho",
        "0.4",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["config"]["rho"].as_f64().unwrap(), 0.4);
    assert_eq!(report["config"]["n_max"].as_u64().unwrap(), 2);
}

#[test]
fn unknown_config_key_is_named_and_fails() {
    let path = temp_path("bad.json");
    std::fs::write(&path, r#"{"schema":1, "experiment":"hs-bound", "rho_max":2.0}"#).unwrap();
    let out = wicklab(&["experiment", "hs-bound", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho_max"));
}

#[test]
fn quantize_emits_operator_json() {
    let out = wicklab(&["quantize", "--symbol", "1*z^[1]*zbar^[1]", "--degree", "4"]);
    assert!(out.status.success());
    let op: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(op["params"]["n"], 1);
    assert_eq!(op["params"]["degree_max"], 4);
    let matrix = op["matrix"].as_array().unwrap();
    assert_eq!(matrix.len(), 25);
    // diagonal entries k + 1
    for k in 0..5 {
        let entry = &matrix[k * 5 + k];
        assert!((entry[0].as_f64().unwrap() - (k as f64 + 1.0)).abs() < 1e-12);
    }
}

#[test]
fn translate_group_law_and_exit_codes() {
    let ok = wicklab(&["translate", "--y", "0.3", "--y2", "0.2i", "--degree", "40"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("group-law defect"));

    // an absurd tolerance turns the same check into an assertion failure
    let fail = wicklab(&[
        "translate", "--y", "0.3", "--y2", "0.2i", "--degree", "40", "--tol", "1e-30",
    ]);
    assert_eq!(fail.status.code(), Some(2));
}

#[test]
fn usage_error_exits_one() {
    let out = wicklab(&["experiment", "no-such-experiment"]);
    assert_eq!(out.status.code(), Some(1));
    let out = wicklab(&["transform", "sideways", "--symbol", "1*z^[1]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_emits_combined_csv() {
    let out = wicklab(&[
        "sweep",
        "--experiment",
        "hs-bound",
        "--rho-grid",
        "0.3,0.5",
        "--n",
        "1..2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("experiment,rho,n,measured,bound,pass\n"));
    // header + 2 rho values x 2 dimensions, plus the trailing println newline
    assert_eq!(text.trim_end().lines().count(), 1 + 2 * 2);
}

#[test]
fn repro_index_row_count() {
    let out = wicklab(&["repro-index"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // 15 criteria, two lines each, plus the header
    assert_eq!(text.lines().count(), 1 + 2 * 15);
}

#[test]
fn basis_subcommand_lists_graded_order() {
    let out = wicklab(&["basis", "--n", "2", "--degree", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "[0,0]");
    assert_eq!(lines[1], "[1,0]");
    assert_eq!(lines[2], "[0,1]");
    assert!(lines[3].starts_with("count: 3"));
}
