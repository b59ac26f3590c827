//! Check records, their aggregation, and the JSON report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::charts::{Chart, Point};
use crate::error::Error;
use crate::harness::sampling::SuiteConfig;

pub const SCHEMA: &str = "elastoforms.report/v1";

/// How an error is measured and bounded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Tolerance {
    /// `max|a − b| / max(1, ‖a‖∞, ‖b‖∞)`.
    Relative(f64),
    /// `max|a − b|`.
    Absolute(f64),
    /// `|a − b|` in units of `ε · s`, with `s` the magnitude of the terms
    /// that produced the value.
    Ulps(f64),
}

impl Tolerance {
    fn bound(self) -> f64 {
        match self {
            Tolerance::Relative(t) | Tolerance::Absolute(t) | Tolerance::Ulps(t) => t,
        }
    }
}

/// Errors of one comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub abs: f64,
    pub rel: f64,
    /// Error in the tolerance's own unit.
    pub score: f64,
}

/// Maximum that propagates NaN.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Compares two equally long value lists.
pub fn measure(tol: Tolerance, a: &[f64], b: &[f64]) -> Measurement {
    debug_assert_eq!(a.len(), b.len());
    let inf_norm = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let abs = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, nan_max);
    let rel = abs / inf_norm(a).max(inf_norm(b)).max(1.0);
    let score = match tol {
        Tolerance::Relative(_) => rel,
        Tolerance::Absolute(_) | Tolerance::Ulps(_) => abs,
    };
    Measurement { abs, rel, score }
}

/// Compares values against references whose natural magnitudes are
/// `scales`; the score is the worst error in ulps of that magnitude.
pub fn measure_ulps(a: &[f64], b: &[f64], scales: &[f64]) -> Measurement {
    let mut m = Measurement {
        abs: 0.0,
        rel: 0.0,
        score: 0.0,
    };
    for ((x, y), s) in a.iter().zip(b).zip(scales) {
        let d = (x - y).abs();
        let s = s.abs().max(f64::MIN_POSITIVE);
        m.abs = nan_max(m.abs, d);
        m.rel = nan_max(m.rel, d / s);
        m.score = nan_max(m.score, d / (f64::EPSILON * s));
    }
    m
}

/// Aggregated result of one check id on one chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub chart: Option<Chart>,
    pub tolerance: Tolerance,
    pub samples: u64,
    pub failures: u64,
    pub errors: u64,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    /// Worst error in the tolerance's unit.
    pub max_score: f64,
    pub worst_point: Option<Point>,
    pub worst_field: Option<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub samples: u64,
    pub failed_samples: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn check(&self, id: &str, chart: Option<Chart>) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id && c.chart == chart)
    }

    /// Records whose id starts with `prefix`.
    pub fn checks_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.checks.iter().filter(move |c| c.id.starts_with(prefix))
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<40} {:<12} {:>8} {:>10} {:>12} {:>12}  result",
            "check", "chart", "samples", "tolerance", "max abs", "max rel"
        );
        for c in &self.checks {
            let chart = c.chart.map_or("-", Chart::name);
            let verdict = if c.pass { "pass" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{:<40} {:<12} {:>8} {:>10.1e} {:>12.3e} {:>12.3e}  {verdict}",
                c.id,
                chart,
                c.samples,
                c.tolerance.bound(),
                c.max_abs_error,
                c.max_rel_error
            );
        }
        let _ = writeln!(
            out,
            "{}: {} checks, {} passed, {} failed ({} samples)",
            self.suite, self.summary.checks, self.summary.passed, self.summary.failed, self.summary.samples
        );
        out
    }
}

#[derive(Debug)]
struct Acc {
    tolerance: Tolerance,
    samples: u64,
    failures: u64,
    errors: u64,
    max_abs: f64,
    max_rel: f64,
    max_score: f64,
    worst_point: Option<Point>,
    worst_field: Option<String>,
    first_error: Option<String>,
}

/// Accumulates samples per `(check id, chart)` in a deterministic order.
#[derive(Debug, Default)]
pub struct Collector {
    tol_rel: Option<f64>,
    map: BTreeMap<(String, Option<Chart>), Acc>,
}

impl Collector {
    pub fn new(tol_rel: Option<f64>) -> Collector {
        Collector {
            tol_rel,
            map: BTreeMap::new(),
        }
    }

    fn effective(&self, tol: Tolerance) -> Tolerance {
        match (tol, self.tol_rel) {
            (Tolerance::Relative(_), Some(t)) => Tolerance::Relative(t),
            _ => tol,
        }
    }

    fn entry(&mut self, id: &str, chart: Option<Chart>, tol: Tolerance) -> &mut Acc {
        let tolerance = self.effective(tol);
        self.map.entry((id.to_string(), chart)).or_insert_with(|| Acc {
            tolerance,
            samples: 0,
            failures: 0,
            errors: 0,
            max_abs: 0.0,
            max_rel: 0.0,
            max_score: 0.0,
            worst_point: None,
            worst_field: None,
            first_error: None,
        })
    }

    pub fn record(
        &mut self,
        id: &str,
        chart: Option<Chart>,
        tol: Tolerance,
        point: Option<Point>,
        field: &str,
        m: Measurement,
    ) {
        let acc = self.entry(id, chart, tol);
        acc.samples += 1;
        let ok = m.score <= acc.tolerance.bound();
        if !ok {
            acc.failures += 1;
        }
        let first = acc.worst_field.is_none();
        let worse = first || (m.score.is_nan() && !acc.max_score.is_nan()) || m.score > acc.max_score;
        if worse {
            acc.max_score = m.score;
            acc.worst_point = point;
            acc.worst_field = Some(field.to_string());
        }
        acc.max_abs = nan_max(acc.max_abs, m.abs);
        acc.max_rel = nan_max(acc.max_rel, m.rel);
    }

    pub fn compare(
        &mut self,
        id: &str,
        chart: Option<Chart>,
        tol: Tolerance,
        point: Option<Point>,
        field: &str,
        a: &[f64],
        b: &[f64],
    ) {
        let m = measure(self.effective(tol), a, b);
        self.record(id, chart, tol, point, field, m);
    }

    /// A sample whose computation failed counts as a failure.
    pub fn error(&mut self, id: &str, chart: Option<Chart>, tol: Tolerance, point: Option<Point>, field: &str, e: &Error) {
        let acc = self.entry(id, chart, tol);
        acc.samples += 1;
        acc.failures += 1;
        acc.errors += 1;
        if acc.first_error.is_none() {
            acc.first_error = Some(format!("{e} (field {field}, point {point:?})"));
        }
    }

    /// Runs `f` and compares its two outputs, recording errors as failures.
    #[allow(clippy::too_many_arguments)]
    pub fn check(
        &mut self,
        id: &str,
        chart: Option<Chart>,
        tol: Tolerance,
        point: Option<Point>,
        field: &str,
        f: impl FnOnce() -> crate::error::Result<(Vec<f64>, Vec<f64>)>,
    ) {
        match f() {
            Ok((a, b)) => self.compare(id, chart, tol, point, field, &a, &b),
            Err(e) => self.error(id, chart, tol, point, field, &e),
        }
    }

    pub fn finish(self, suite: &str, config: &SuiteConfig) -> SuiteReport {
        let checks: Vec<CheckRecord> = self
            .map
            .into_iter()
            .map(|((id, chart), acc)| CheckRecord {
                pass: acc.failures == 0 && acc.samples > 0,
                id,
                chart,
                tolerance: acc.tolerance,
                samples: acc.samples,
                failures: acc.failures,
                errors: acc.errors,
                max_abs_error: acc.max_abs,
                max_rel_error: acc.max_rel,
                max_score: acc.max_score,
                worst_point: acc.worst_point,
                worst_field: acc.worst_field,
                first_error: acc.first_error,
            })
            .collect();
        let passed = checks.iter().filter(|c| c.pass).count();
        let summary = Summary {
            checks: checks.len(),
            passed,
            failed: checks.len() - passed,
            samples: checks.iter().map(|c| c.samples).sum(),
            failed_samples: checks.iter().map(|c| c.failures).sum(),
        };
        SuiteReport {
            schema: SCHEMA.to_string(),
            suite: suite.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config.clone(),
            summary,
            checks,
        }
    }
}
