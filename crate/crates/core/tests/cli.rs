use std::process::{Command, Output};

use hkcontact::report::{from_json, to_json};
use serde_json::Value;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("spawn verify")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn axioms_pass_and_list_each_check() {
    let out = verify(&["--suite", "axioms", "--samples", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<_> = text.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")).collect();
    assert!(rows.len() >= 8);
    for row in rows {
        let fields: Vec<_> = row.splitn(5, ' ').collect();
        assert_eq!(fields[0], "PASS");
        assert!(fields[1].starts_with("axioms."));
        fields[2].parse::<f64>().unwrap();
        fields[3].parse::<f64>().unwrap();
        assert!(!fields[4].trim().is_empty());
    }
    assert!(text.contains("calibration: quaternion_side=Right sign_phi=-1"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["--suite", "nope"][..],
        &["--bogus"],
        &["--n", "0"],
        &["--samples", "0"],
        &["--tol-deep", "1e-12"],
        &["--fd-step", "-1"],
        &["--format", "yaml"],
    ] {
        assert_eq!(verify(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_report_path_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("r.json");
    let out = verify(&["--suite", "axioms", "--samples", "4", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn report_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = verify(&["--suite", "axioms", "--samples", "4", "--format", "json", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(from_json(&body).unwrap().summary.failed, 0);
}

#[test]
fn json_schema_and_summary() {
    let out = verify(&["--suite", "axioms", "--suite", "h-connection", "--samples", "16", "--format", "json"]);
    let v = json(&out);
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["calibration", "checks", "config", "summary", "timing"]);
    let checks = v["checks"].as_array().unwrap();
    for c in checks {
        let keys: Vec<_> = c.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["name", "paper_ref", "pass", "residual", "threshold"]);
        assert!(!c["paper_ref"].as_str().unwrap().is_empty());
    }
    let failed = checks.iter().filter(|c| c["pass"] == Value::Bool(false)).count();
    assert_eq!(v["summary"]["failed"].as_u64().unwrap() as usize, failed);
    assert_eq!(v["summary"]["total"].as_u64().unwrap() as usize, checks.len());
    assert_eq!(out.status.code() == Some(0), failed == 0);
    assert_eq!(v["config"]["suites"], serde_json::json!(["axioms", "h-connection"]));
    for key in ["quaternion_side", "sign_phi", "sectional_sign"] {
        assert!(!v["calibration"][key].is_null(), "{key}");
    }
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let out = verify(&["--suite", "axioms", "--samples", "4", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"threshold\"")).unwrap();
    let number = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = number.split(['e', 'E']).next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{number}");
}

#[test]
fn same_config_gives_identical_reports() {
    let args = ["--suite", "axioms", "--format", "json"];
    let (a, b) = (json(&verify(&args)), json(&verify(&args)));
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(serde_json::to_string(&a["checks"]).unwrap(), serde_json::to_string(&b["checks"]).unwrap());
    assert_eq!(strip(a), strip(b));
}

#[test]
fn json_round_trips() {
    let out = verify(&["--suite", "theorems", "--samples", "4", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = from_json(&text).unwrap();
    assert_eq!(from_json(&to_json(&report)).unwrap(), report);
    assert_eq!(to_json(&report), text);
}

#[test]
fn over_tight_tolerances_fail_the_ricci_checks() {
    let out = verify(&[
        "--suite",
        "curvature",
        "--samples",
        "16",
        "--tol-closed",
        "1e-14",
        "--tol-fd",
        "1e-13",
        "--tol-deep",
        "1e-12",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let ricci = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "curvature.ricci_bar").unwrap();
    assert_eq!(ricci["pass"], Value::Bool(false));
    assert!(v["summary"]["failed"].as_u64().unwrap() > 0);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("failed: curvature.ricci_bar"));
    assert!(stderr.contains("failed: curvature.einstein"));
}
