//! Exit-code and output contract of the binary.

use std::process::Command;

fn run(args: &[&str]) -> (Option<i32>, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dihedral"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn domain_errors_exit_2() {
    let (code, _, err) = run(&["chars", "--q", "4"]);
    assert_eq!(code, Some(2));
    assert!(err.contains("odd"));

    let (code, _, _) = run(&["tower", "--file", "/does/not/exist"]);
    assert_eq!(code, Some(2));

    let (code, _, _) = run(&["euler", "--fk", "1,1", "--fL", "3,0,1", "--q", "3", "--bound", "10"]);
    assert_eq!(code, Some(2), "degree mismatch is a usage error");
}

#[test]
fn passing_runs_exit_0() {
    let (code, out, _) = run(&["chars", "--q", "5", "--verify"]);
    assert_eq!(code, Some(0));
    assert!(out.contains("all passed"));

    let (code, out, _) = run(&[
        "tower",
        "--file",
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/tower_disc_m191_p13.json"),
        "--fit",
    ]);
    assert_eq!(code, Some(0));
    assert!(out.contains("X_L = X_K X_K'"));
}

#[test]
fn failing_checks_exit_3() {
    // x^2 - 5 is not the quadratic resolvent of x^3 - 2
    let (code, out, _) = run(&[
        "euler", "--fk", "-2,0,0,1", "--fL", "-5,0,1", "--q", "3", "--bound", "100",
    ]);
    assert_eq!(code, Some(3));
    assert!(out.contains("FAIL"));
    assert!(out.contains("not a dihedral splitting pattern"));
}

#[test]
fn json_reports_parse_and_carry_identities() {
    let (code, out, _) = run(&["--json", "chars", "--q", "7", "--verify"]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
    let checks = v["checks"].as_array().expect("checks array");
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["pass"].as_bool().unwrap());
        assert!(!c["identity"].as_str().unwrap().is_empty());
    }
}
