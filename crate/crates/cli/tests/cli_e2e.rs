//! End-to-end runs of the shipped binary: golden output strings, error
//! positions, exit codes and the environment-variable degree cap.

use std::process::Command;

fn qgrass(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qgrass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn qgrass_env(args: &[&str], key: &str, value: &str) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qgrass"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

#[test]
fn det_matches_the_golden_rendering() {
    let out = qgrass(&["det", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x[1,1]*x[2,2] - q*x[1,2]*x[2,1]");
}

#[test]
fn minor_subcommand_expands_the_permutation_sum() {
    let out = qgrass(&[
        "minor", "--m", "2", "--n", "3", "--rows", "1,2", "--cols", "1,3",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x[1,1]*x[2,3] - q*x[1,3]*x[2,1]");
}

#[test]
fn nf_normalizes_in_each_ring() {
    let out = qgrass(&[
        "nf",
        "--ring",
        "qm",
        "--m",
        "2",
        "--n",
        "2",
        "--expr",
        "x[2,2]*x[1,1]",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "x[1,1]*x[2,2] - (q^2 - 1)/(q)*x[1,2]*x[2,1]");

    let out = qgrass(&[
        "nf",
        "--ring",
        "grass",
        "--k",
        "2",
        "--n",
        "4",
        "--expr",
        "[1,3]*u^-1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[1,3] * u^-1");

    let out = qgrass(&[
        "nf", "--ring", "t", "--k", "2", "--n", "4", "--expr", "y*x[1,1]",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "q*x[1,1]*y");
}

#[test]
fn straighten_golden_output() {
    let out = qgrass(&["straighten", "--k", "2", "--n", "4", "--expr", "[2,4][1,3]"]);
    assert!(out.status.success());
    // Frozen from the exact solver; the library test suite independently
    // verifies the re-embedding equality for every degree-2 word.
    assert_eq!(
        stdout(&out),
        "(q^2 - 1)/(q^3) * [1,2][3,4]\nq^-2 * [1,3][2,4]"
    );

    let out = qgrass(&["straighten", "--k", "2", "--n", "4", "--expr", "[3,4][1,2]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "q^-2 * [1,2][3,4]");
}

#[test]
fn straighten_honors_the_degree_cap_env() {
    let word = "[1,2][1,2][1,2][1,2]";
    let out = qgrass(&["straighten", "--k", "2", "--n", "4", "--expr", word]);
    assert!(!out.status.success(), "degree 4 exceeds the default cap 3");
    let out = qgrass_env(
        &["straighten", "--k", "2", "--n", "4", "--expr", word],
        "QGRASS_MAX_DEGREE",
        "4",
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout(&out), "[1,2][1,2][1,2][1,2]");
}

#[test]
fn apply_auto_scales_coordinates() {
    let descriptor = r#"{"alpha0": "1", "alpha": ["2", "1"], "beta": ["1", "1"]}"#;
    for (expr, expected) in [
        ("[1,3]", "2 * [1,3]"),
        ("[2,3]", "[2,3]"),
        ("[3,4]", "2 * [3,4]"),
    ] {
        let out = qgrass(&[
            "apply-auto",
            "--k",
            "2",
            "--n",
            "4",
            "--auto",
            descriptor,
            "--expr",
            expr,
        ]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), expected, "action on {expr}");
    }
}

#[test]
fn parse_errors_carry_positions_and_exit_2() {
    let out = qgrass(&[
        "nf",
        "--ring",
        "grass",
        "--k",
        "2",
        "--n",
        "4",
        "--expr",
        "[1,3] + y",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1:9"), "stderr was: {err}");

    let out = qgrass(&[
        "nf", "--ring", "qm", "--m", "2", "--n", "2", "--expr", "x[1,3]",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("out of bounds"), "stderr was: {err}");
}

#[test]
fn check_subcommand_reports_and_exits() {
    let out = qgrass(&[
        "check",
        "--id",
        "lemma-how-u-commutes",
        "--k",
        "2",
        "--n",
        "4",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("pass lemma-how-u-commutes"));

    let out = qgrass(&["check", "--id", "diagram-tau", "--k", "2", "--n", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[requires 2k = n]"));

    let out = qgrass(&["check", "--id", "no-such-check", "--k", "2", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));

    let out = qgrass(&["check", "--list"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("lemma-how-u-commutes"));
}

#[test]
fn check_all_writes_a_valid_report() {
    let dir = std::env::temp_dir().join("qgrass-e2e-report.json");
    let path = dir.to_str().unwrap();
    let out = qgrass(&["check-all", "--shape", "2,4", "--json", path]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    qgrass_cli::report::validate_report_json(&v).unwrap();
    std::fs::remove_file(path).ok();
}
