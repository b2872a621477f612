use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Number, Value};

use crate::calibration::CalibrationRecord;
use crate::config::RunConfig;

/// Non-finite residuals are written as `null`.
mod nullable_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub paper_ref: String,
    #[serde(with = "nullable_f64")]
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, paper_ref: impl Into<String>, residual: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.into(),
            paper_ref: paper_ref.into(),
            residual,
            threshold,
            pass: residual <= threshold,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(checks: &[CheckResult]) -> Self {
        let passed = checks.iter().filter(|c| c.pass).count();
        Summary { total: checks.len(), passed, failed: checks.len() - passed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: RunConfig,
    pub calibration: CalibrationRecord,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    /// Wall time per suite in seconds. Not covered by the determinism contract.
    pub timing: BTreeMap<String, f64>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn reformat_floats(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(f) = num.as_f64() {
                *num = Number::from_str(&sci(f)).expect("formatted float is a valid JSON number");
            }
        }
        Value::Array(items) => items.iter_mut().for_each(reformat_floats),
        Value::Object(map) => map.values_mut().for_each(reformat_floats),
        _ => {}
    }
}

/// JSON with sorted keys and every float written with 17 significant digits.
pub fn to_json(report: &SuiteReport) -> String {
    let mut value = serde_json::to_value(report).expect("report serializes");
    reformat_floats(&mut value);
    let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
    out.push('\n');
    out
}

/// The `checks` section alone, in the same encoding as [`to_json`].
pub fn checks_json(report: &SuiteReport) -> String {
    let mut value = serde_json::to_value(&report.checks).expect("checks serialize");
    reformat_floats(&mut value);
    serde_json::to_string_pretty(&value).expect("value serializes")
}

pub fn from_json(s: &str) -> serde_json::Result<SuiteReport> {
    serde_json::from_str(s)
}

pub fn to_text(report: &SuiteReport) -> String {
    let c = &report.config;
    let cal = &report.calibration;
    let mut out = String::new();
    let suites: Vec<_> = c.suites.iter().map(|s| s.name()).collect();
    let _ = writeln!(
        out,
        "config: n={} seed={} samples={} fd_step={:e} tol_closed={:e} tol_fd={:e} tol_deep={:e} suites={}",
        c.n,
        c.seed,
        c.samples,
        c.fd_step,
        c.tol_closed,
        c.tol_fd,
        c.tol_deep,
        suites.join(",")
    );
    let _ = writeln!(
        out,
        "calibration: quaternion_side={:?} sign_phi={:+} sectional_sign={:+} expansion_pairing={:?}",
        cal.quaternion_side, cal.sign_phi, cal.sectional_sign, cal.expansion_pairing
    );
    for f in &cal.findings {
        let _ = writeln!(out, "finding: {f}");
    }
    for check in &report.checks {
        let _ = writeln!(
            out,
            "{} {} {:.3e} {:.0e} {}",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.residual,
            check.threshold,
            check.paper_ref
        );
    }
    let s = report.summary;
    let _ = writeln!(out, "summary: total={} passed={} failed={}", s.total, s.passed, s.failed);
    let timing: Vec<_> = report.timing.iter().map(|(k, v)| format!("{k}={v:.3}s")).collect();
    let _ = writeln!(out, "timing: {}", timing.join(" "));
    out
}

pub fn render(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Text => to_text(report),
        Format::Json => to_json(report),
    }
}

/// Writes the report to `path`, or to stdout when no path is given.
pub fn emit_report(report: &SuiteReport, format: Format, path: Option<&Path>) -> io::Result<()> {
    let body = render(report, format);
    match path {
        Some(p) => std::fs::write(p, body),
        None => io::stdout().lock().write_all(body.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::calibrate;

    fn report(checks: Vec<CheckResult>) -> SuiteReport {
        let (_, calibration) = calibrate(1, 3, crate::numerics::DEFAULT_FD_STEP).unwrap();
        SuiteReport { config: RunConfig::default(), calibration, summary: Summary::of(&checks), checks, timing: BTreeMap::new() }
    }

    #[test]
    fn text_lines_and_summary() {
        let r = report(vec![
            CheckResult::new("a.ok", "x = x", 1e-12, 1e-9),
            CheckResult::new("a.bad", "y = 0", 2.0, 1e-9),
            CheckResult::new("a.nan", "z = 0", f64::NAN, 1e-9),
        ]);
        assert_eq!(r.summary, Summary { total: 3, passed: 1, failed: 2 });
        let text = to_text(&r);
        assert!(text.contains("\nPASS a.ok 1.000e-12 1e-9 x = x\n"));
        assert!(text.contains("\nFAIL a.bad 2.000e0 1e-9 y = 0\n"));
        assert!(text.contains("\nFAIL a.nan NaN 1e-9 z = 0\n"));
        assert_eq!(r.failures().count(), 2);
    }

    #[test]
    fn nan_residual_is_null_and_parses_back() {
        let r = report(vec![CheckResult::new("a.nan", "z = 0", f64::NAN, 1e-9)]);
        let json = to_json(&r);
        assert!(json.contains("\"residual\": null"));
        let back = from_json(&json).unwrap();
        assert!(back.checks[0].residual.is_nan());
        assert!(!back.checks[0].pass);
    }
}
