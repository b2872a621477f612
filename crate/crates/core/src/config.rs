use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::numerics::DEFAULT_FD_STEP;

/// Verification suites, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Axioms,
    FieldCalculus,
    HConnection,
    FoliatedChart,
    Curvature,
    Theorems,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Axioms,
        Suite::FieldCalculus,
        Suite::HConnection,
        Suite::FoliatedChart,
        Suite::Curvature,
        Suite::Theorems,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::FieldCalculus => "field-calculus",
            Suite::HConnection => "h-connection",
            Suite::FoliatedChart => "foliated-chart",
            Suite::Curvature => "curvature",
            Suite::Theorems => "theorems",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown suite `{0}` (expected one of axioms, field-calculus, h-connection, foliated-chart, curvature, theorems, all)")]
    UnknownSuite(String),
    #[error("n must be at least 1")]
    InvalidN,
    #[error("samples must be positive")]
    InvalidSamples,
    #[error("{0} must be positive and finite")]
    NonPositive(&'static str),
    #[error("tolerances must satisfy tol_closed <= tol_fd <= tol_deep")]
    ToleranceOrder,
}

/// Parses suite names, expanding `all`, deduplicating, and sorting into
/// execution order. An empty list means every suite.
pub fn parse_suites<S: AsRef<str>>(names: &[S]) -> Result<Vec<Suite>, ConfigError> {
    let mut out = Vec::new();
    for name in names {
        match name.as_ref() {
            "all" => out.extend(Suite::ALL),
            other => out.push(other.parse()?),
        }
    }
    if out.is_empty() {
        out.extend(Suite::ALL);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Tolerance tier of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tier {
    /// Closed-form and analytic-derivative routes.
    Closed,
    /// One level of finite differencing.
    Fd,
    /// Nested differencing or frame sums.
    Deep,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub n: usize,
    pub seed: u64,
    pub samples: u32,
    pub fd_step: f64,
    pub tol_closed: f64,
    pub tol_fd: f64,
    pub tol_deep: f64,
    pub suites: Vec<Suite>,
    pub report_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 1,
            seed: 42,
            samples: 256,
            fd_step: DEFAULT_FD_STEP,
            tol_closed: 1e-9,
            tol_fd: 1e-6,
            tol_deep: 1e-5,
            suites: Suite::ALL.to_vec(),
            report_path: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::InvalidN);
        }
        if self.samples == 0 {
            return Err(ConfigError::InvalidSamples);
        }
        for (name, v) in [
            ("fd_step", self.fd_step),
            ("tol_closed", self.tol_closed),
            ("tol_fd", self.tol_fd),
            ("tol_deep", self.tol_deep),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::NonPositive(name));
            }
        }
        if !(self.tol_closed <= self.tol_fd && self.tol_fd <= self.tol_deep) {
            return Err(ConfigError::ToleranceOrder);
        }
        Ok(())
    }

    pub fn threshold(&self, tier: Tier) -> f64 {
        match tier {
            Tier::Closed => self.tol_closed,
            Tier::Fd => self.tol_fd,
            Tier::Deep => self.tol_deep,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_parsing() {
        assert_eq!(parse_suites::<&str>(&[]).unwrap(), Suite::ALL.to_vec());
        assert_eq!(parse_suites(&["theorems", "axioms", "axioms"]).unwrap(), vec![Suite::Axioms, Suite::Theorems]);
        assert_eq!(parse_suites(&["all"]).unwrap().len(), 6);
        assert_eq!(parse_suites(&["nope"]), Err(ConfigError::UnknownSuite("nope".into())));
    }

    #[test]
    fn validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig { tol_deep: 1e-12, ..RunConfig::default() };
        assert_eq!(bad.validate(), Err(ConfigError::ToleranceOrder));
        assert_eq!(RunConfig { n: 0, ..RunConfig::default() }.validate(), Err(ConfigError::InvalidN));
        assert_eq!(RunConfig { samples: 0, ..RunConfig::default() }.validate(), Err(ConfigError::InvalidSamples));
        assert!(RunConfig { fd_step: -1.0, ..RunConfig::default() }.validate().is_err());
        assert!(RunConfig { tol_fd: f64::NAN, ..RunConfig::default() }.validate().is_err());
    }
}
