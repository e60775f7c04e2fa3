//! Machine-readable identity reports.
//!
//! Every identity check produces an [`IdentityReport`]:
//! `{"identity": ..., "params": {...}, "max_residual": ..., "pass": ...}`.
//! Known errata are collected separately as [`Erratum`] entries and never
//! count as failures.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub type Params = BTreeMap<String, Value>;

/// Builds a [`Params`] map: `params! { "n" => 6, "j" => 0 }`.
#[macro_export]
macro_rules! params {
    () => { $crate::report::Params::new() };
    ($($key:expr => $value:expr),+ $(,)?) => {{
        let mut p = $crate::report::Params::new();
        $( p.insert(String::from($key), ::serde_json::json!($value)); )+
        p
    }};
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: Params,
    pub max_residual: f64,
    pub pass: bool,
}

impl IdentityReport {
    /// Passes iff the residual is finite and at most `tol`.
    pub fn evaluate(
        identity: impl Into<String>,
        params: Params,
        max_residual: f64,
        tol: f64,
    ) -> Self {
        Self {
            identity: identity.into(),
            params,
            max_residual,
            pass: max_residual.is_finite() && max_residual <= tol,
        }
    }

    /// A yes/no check with no meaningful residual.
    pub fn boolean(identity: impl Into<String>, params: Params, holds: bool) -> Self {
        Self {
            identity: identity.into(),
            params,
            max_residual: if holds { 0.0 } else { f64::INFINITY },
            pass: holds,
        }
    }
}

/// A documented discrepancy in a published formula, evaluated and logged but never asserted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Erratum {
    pub statement: String,
    pub params: Params,
    /// Evaluations of each displayed expression, keyed by a short label.
    pub evaluations: BTreeMap<String, Value>,
    /// Whether the displayed statement holds at these parameters.
    pub holds: bool,
    pub note: String,
}

/// Report for one or more suites: checks plus quarantined errata.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: Params,
    pub checks: Vec<IdentityReport>,
    pub erratum: Vec<Erratum>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errata_logged: usize,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, config: Params) -> Self {
        Self {
            suite: suite.into(),
            config,
            ..Self::default()
        }
    }

    pub fn push(&mut self, check: IdentityReport) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = IdentityReport>) {
        self.checks.extend(checks);
    }

    pub fn log_erratum(&mut self, e: Erratum) {
        self.erratum.push(e);
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityReport> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Recomputes the summary; call before serializing.
    pub fn finish(mut self) -> Self {
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        self.summary = Summary {
            total: self.checks.len(),
            passed: self.checks.len() - failed,
            failed,
            errata_logged: self.erratum.len(),
            pass: failed == 0,
        };
        self
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
        self.erratum.extend(other.erratum);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_requires_finite_residual_within_tolerance() {
        assert!(IdentityReport::evaluate("x", params!(), 0.0, 0.0).pass);
        assert!(!IdentityReport::evaluate("x", params!(), 1e-17, 0.0).pass);
        assert!(!IdentityReport::evaluate("x", params!(), f64::NAN, 1.0).pass);
    }

    #[test]
    fn errata_do_not_fail_a_suite() {
        let mut r = SuiteReport::new("s", params! { "dim" => 4 });
        r.push(IdentityReport::boolean("ok", params! { "n" => 1 }, true));
        r.log_erratum(Erratum {
            statement: "wrong".into(),
            params: params!(),
            evaluations: BTreeMap::new(),
            holds: false,
            note: String::new(),
        });
        let r = r.finish();
        assert!(r.summary.pass);
        assert_eq!(r.summary.errata_logged, 1);
    }

    #[test]
    fn json_shape() {
        let r = IdentityReport::evaluate("a = b", params! { "n" => 6, "j" => 0 }, 0.0, 1e-9);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"identity":"a = b","params":{"j":0,"n":6},"max_residual":0.0,"pass":true}"#
        );
    }
}
