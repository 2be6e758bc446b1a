//! End-to-end checks of the amtrap binary: exit codes, output files,
//! and determinism as a user would observe them.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_amtrap");

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should spawn")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn verify_passes_with_default_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["verify"], dir.path());
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("all 13 checks passed"), "{text}");
    assert!(text.contains("kernel-identity"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_fails_at_unattainable_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["verify", "--tol", "1e-30"], dir.path());
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("FAIL"), "{text}");
    assert!(text.contains("checks failed"), "{text}");
}

#[test]
fn verify_rejects_nonpositive_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["verify", "--tol", "-1"], dir.path());
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn sweep_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("config.json"),
        r#"{
            "function_ids": ["quadratic", "cubic", "pow_2_5", "linear"],
            "intervals": [[0.0, 1.0], [0.5, 1.5]],
            "alphas": [0.0, 0.5, 1.0],
            "ms": [0.5, 1.0],
            "qs": [1.0, 2.0],
            "output_path": "sweep.csv"
        }"#,
    )
    .unwrap();
    let first = run(&["sweep", "--config", "config.json"], dir.path());
    assert!(first.status.success(), "{}", stderr(&first));
    assert!(stdout(&first).contains("96 rows"), "{}", stdout(&first));
    let bytes_first = std::fs::read(dir.path().join("sweep.csv")).unwrap();

    let second = run(
        &["sweep", "--config", "config.json", "--out", "again.csv"],
        dir.path(),
    );
    assert!(second.status.success(), "{}", stderr(&second));
    let bytes_second = std::fs::read(dir.path().join("again.csv")).unwrap();
    assert_eq!(bytes_first, bytes_second);

    let header = String::from_utf8_lossy(&bytes_first);
    assert!(
        header.starts_with("function_id,a,b,alpha,m,q,lhs,"),
        "{header}"
    );
}

#[test]
fn sweep_writes_json_when_configured() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("config.json"),
        r#"{
            "function_ids": ["exp"],
            "intervals": [[0.0, 1.0]],
            "alphas": [1.0],
            "ms": [1.0],
            "qs": [2.0],
            "output_path": "rows.json",
            "format": "json"
        }"#,
    )
    .unwrap();
    let output = run(&["sweep", "--config", "config.json"], dir.path());
    assert!(output.status.success(), "{}", stderr(&output));
    let parsed: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("rows.json")).unwrap()).unwrap();
    let rows = parsed.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["function_id"], "exp");
    assert!(rows[0]["rhs_thm22_tight"].is_f64());
}

#[test]
fn invalid_config_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), r#"{"qs": []}"#).unwrap();
    let output = run(&["sweep", "--config", "bad.json"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("qs"), "{}", stderr(&output));

    std::fs::write(dir.path().join("typo.json"), r#"{"alpahs": [1.0]}"#).unwrap();
    let output = run(&["sweep", "--config", "typo.json"], dir.path());
    assert_eq!(output.status.code(), Some(2));

    let output = run(&["sweep", "--config", "missing.json"], dir.path());
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn tightness_writes_pivot_table() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("config.json"),
        r#"{
            "function_ids": ["quadratic", "linear"],
            "intervals": [[0.0, 1.0]],
            "alphas": [1.0],
            "ms": [1.0],
            "qs": [1.0, 2.0],
            "output_path": "table.csv"
        }"#,
    )
    .unwrap();
    let output = run(&["tightness", "--config", "config.json"], dir.path());
    assert!(output.status.success(), "{}", stderr(&output));
    let text = std::fs::read_to_string(dir.path().join("table.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha,m,q,thm21,thm22_tight,thm22,thm23_tight,thm23,thm24,evaluated,skipped"
    );
    assert_eq!(lines.count(), 2);
    // the equality-case tie lands on thm21 by label order
    let q1_line = text.lines().nth(1).unwrap();
    let cells: Vec<&str> = q1_line.split(',').collect();
    assert_eq!(cells[3], "2");
}

#[test]
fn check_convexity_reports_falsification_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // |f''| = 2.8125 x^(1/4) is concave, so plain convexity is falsified
    let output = run(&["check-convexity", "--function", "pow_2_25"], dir.path());
    assert_eq!(output.status.code(), Some(1));
    let text = stdout(&output);
    assert!(text.contains("falsified"), "{text}");
    assert!(text.contains("margin"), "{text}");

    let output = run(&["check-convexity", "--function", "quadratic"], dir.path());
    assert!(output.status.success(), "{}", stderr(&output));
    assert!(
        stdout(&output).contains("not falsified"),
        "{}",
        stdout(&output)
    );

    let output = run(&["check-convexity", "--function", "sine"], dir.path());
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr(&output).contains("unknown function"),
        "{}",
        stderr(&output)
    );
}
