//! Structured verification report: per-suite named checks with residuals,
//! tolerances and verdicts, plus a plain-text summary table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::point::Point4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// How a check reads its residual: `Bound` passes when the maximum stays
/// below the tolerance; `Floor` passes when the quantity exceeds the
/// tolerance somewhere (a non-vanishing certificate), and degrades to the
/// stated verdict when it never does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Bound,
    Floor,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub kind: CheckKind,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub worst_point: Option<Point4>,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub statement: String,
    pub verdict: Verdict,
    /// Worst bound-type residual across the suite's checks.
    pub max_residual: f64,
    pub samples: usize,
    pub checks: Vec<CheckReport>,
    /// Certificate label where a suite issues one
    /// (e.g. NOT_LCK, SEMI_SYMMETRIC, INCONCLUSIVE).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    /// Captured execution error, reported as a failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub family: String,
    pub seed: u64,
    pub samples: usize,
    pub closed_form_tolerance: f64,
    pub grid_tolerance: f64,
    pub suites: Vec<SuiteReport>,
    pub global_verdict: Verdict,
    /// Wall-clock milliseconds per suite. Excluded from the reproducibility
    /// guarantee: strip this key when comparing reports byte-for-byte.
    pub timing_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn compute_global(&mut self) {
        self.global_verdict = self
            .suites
            .iter()
            .map(|s| s.verdict)
            .fold(Verdict::Pass, Verdict::combine);
    }

    pub fn exit_code(&self) -> i32 {
        match self.global_verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Plain-text summary table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let width = self
            .suites
            .iter()
            .map(|s| s.name.len())
            .max()
            .unwrap_or(8)
            .max(8);
        out.push_str(&format!(
            "{:<width$}  {:>12}  {:>9}  {:>8}  verdict\n",
            "suite", "max residual", "tolerance", "samples"
        ));
        for s in &self.suites {
            let tol = s
                .checks
                .iter()
                .filter(|c| c.kind == CheckKind::Bound)
                .map(|c| c.tolerance)
                .fold(f64::INFINITY, f64::min);
            let tol_str = if tol.is_finite() {
                format!("{tol:.1e}")
            } else {
                "-".to_string()
            };
            let cert = s
                .certificate
                .as_ref()
                .map(|c| format!("  [{c}]"))
                .unwrap_or_default();
            out.push_str(&format!(
                "{:<width$}  {:>12.3e}  {:>9}  {:>8}  {}{}\n",
                s.name,
                s.max_residual,
                tol_str,
                s.samples,
                s.verdict.label(),
                cert
            ));
            if let Some(err) = &s.error {
                out.push_str(&format!("{:<width$}  error: {err}\n", ""));
            }
        }
        out.push_str(&format!(
            "global verdict: {}\n",
            self.global_verdict.label()
        ));
        out
    }
}

/// Accumulator for one named check over many sample points.
pub struct Agg {
    name: &'static str,
    kind: CheckKind,
    tol: f64,
    on_floor_miss: Verdict,
    max: f64,
    worst: Option<Point4>,
    n: usize,
}

impl Agg {
    pub fn bound(name: &'static str, tol: f64) -> Agg {
        Agg {
            name,
            kind: CheckKind::Bound,
            tol,
            on_floor_miss: Verdict::Fail,
            max: 0.0,
            worst: None,
            n: 0,
        }
    }

    /// A non-vanishing certificate: passes once the value exceeds `floor`
    /// somewhere; reports `on_miss` when it never does.
    pub fn floor(name: &'static str, floor: f64, on_miss: Verdict) -> Agg {
        Agg {
            name,
            kind: CheckKind::Floor,
            tol: floor,
            on_floor_miss: on_miss,
            max: 0.0,
            worst: None,
            n: 0,
        }
    }

    pub fn push(&mut self, value: f64, p: Point4) {
        self.n += 1;
        let v = value.abs();
        if v >= self.max {
            self.max = v;
            self.worst = Some(p);
        }
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn into_report(self) -> CheckReport {
        let verdict = if self.n == 0 {
            Verdict::Inconclusive
        } else {
            match self.kind {
                CheckKind::Bound => {
                    if self.max <= self.tol {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    }
                }
                CheckKind::Floor => {
                    if self.max >= self.tol {
                        Verdict::Pass
                    } else {
                        self.on_floor_miss
                    }
                }
            }
        };
        CheckReport {
            name: self.name.to_string(),
            kind: self.kind,
            residual: self.max,
            tolerance: self.tol,
            verdict,
            worst_point: self.worst,
            samples: self.n,
        }
    }
}

/// Assemble a suite report from its checks.
pub fn suite_from_checks(
    name: &str,
    statement: &str,
    samples: usize,
    checks: Vec<CheckReport>,
    certificate: Option<String>,
) -> SuiteReport {
    let verdict = checks
        .iter()
        .map(|c| c.verdict)
        .fold(Verdict::Pass, Verdict::combine);
    let max_residual = checks
        .iter()
        .filter(|c| c.kind == CheckKind::Bound)
        .map(|c| c.residual)
        .fold(0.0, f64::max);
    SuiteReport {
        name: name.to_string(),
        statement: statement.to_string(),
        verdict,
        max_residual,
        samples,
        checks,
        certificate,
        error: None,
    }
}
