//! Acceptance criteria, run at their stated tolerances and sizes.
//!
//! Every criterion prints one `criterion N: PASS|FAIL` line; the test fails
//! if any of them fails.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use elastoforms::harness::{run_suite, CheckRecord, SuiteConfig, SuiteReport, Tolerance};
use elastoforms::Chart;

struct Outcome {
    problems: Vec<String>,
    elapsed: Duration,
}

/// A required check: id prefix, charts that must be present, and the loosest
/// tolerance accepted for it.
struct Requirement {
    ids: &'static [&'static str],
    charts: &'static [Option<Chart>],
    limit: Limit,
}

#[derive(Clone, Copy)]
enum Limit {
    Relative(f64),
    Absolute(f64),
    /// Either measure, bounded by the same number.
    Any(f64),
}

impl Limit {
    fn admits(self, tol: Tolerance) -> bool {
        match (self, tol) {
            (Limit::Relative(l), Tolerance::Relative(t)) => t <= l,
            (Limit::Absolute(l), Tolerance::Absolute(t)) => t <= l,
            (Limit::Any(l), Tolerance::Relative(t) | Tolerance::Absolute(t)) => t <= l,
            _ => false,
        }
    }
}

const BUILTIN: &[Option<Chart>] = &[Some(Chart::Cartesian), Some(Chart::Cylindrical), Some(Chart::Spherical)];
const ADAPTED: &[Option<Chart>] = &[Some(Chart::Cylindrical), Some(Chart::Spherical)];

fn inspect(report: &SuiteReport, reqs: &[Requirement], min_samples: u64, problems: &mut Vec<String>) {
    for req in reqs {
        for id in req.ids {
            for chart in req.charts {
                match report.check(id, *chart) {
                    None => problems.push(format!("{id} on {chart:?} missing")),
                    Some(rec) => judge(rec, req.limit, min_samples, problems),
                }
            }
        }
    }
}

fn judge(rec: &CheckRecord, limit: Limit, min_samples: u64, problems: &mut Vec<String>) {
    let label = format!("{} on {:?}", rec.id, rec.chart);
    if !limit.admits(rec.tolerance) {
        problems.push(format!("{label}: tolerance {:?} looser than required", rec.tolerance));
    }
    if rec.samples < min_samples {
        problems.push(format!("{label}: only {} samples", rec.samples));
    }
    if !rec.pass {
        problems.push(format!(
            "{label}: {} failures, {} errors, max abs {:e}, max rel {:e}",
            rec.failures, rec.errors, rec.max_abs_error, rec.max_rel_error
        ));
    }
}

fn run(suite: &str, config: &SuiteConfig, reqs: &[Requirement], min_samples: u64) -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    match run_suite(suite, config) {
        Ok(report) => {
            inspect(&report, reqs, min_samples, &mut problems);
            for rec in report.checks.iter().filter(|c| !c.pass) {
                problems.push(format!("{} on {:?} failed", rec.id, rec.chart));
            }
        }
        Err(e) => problems.push(format!("suite {suite} did not run: {e}")),
    }
    Outcome {
        problems,
        elapsed: start.elapsed(),
    }
}

fn sweep() -> SuiteConfig {
    SuiteConfig {
        seed: 42,
        points: 20,
        fields: 100,
        moduli: 5,
        tol_rel: None,
        charts: Chart::BUILTIN.to_vec(),
    }
}

fn criterion_1() -> Outcome {
    let reqs = [Requirement {
        ids: &["bridge.gradient", "bridge.divergence", "bridge.curl"],
        charts: BUILTIN,
        limit: Limit::Relative(1e-9),
    }];
    run("bridge", &sweep(), &reqs, 100 * 20)
}

fn criterion_2() -> Outcome {
    let reqs = [Requirement {
        ids: &["cn.classical_vs_form", "cn.classical_vs_gradcurl", "cn.form_vs_gradcurl"],
        charts: BUILTIN,
        limit: Limit::Relative(1e-9),
    }];
    run("cn_equiv", &sweep(), &reqs, 100 * 20 * 5)
}

fn criterion_3() -> Outcome {
    let reqs = [Requirement {
        ids: &["strain.lie_vs_covariant"],
        charts: BUILTIN,
        limit: Limit::Relative(1e-10),
    }];
    run("strain_equiv", &sweep(), &reqs, 100 * 20)
}

fn criterion_4() -> Outcome {
    let config = SuiteConfig {
        fields: 50,
        ..sweep()
    };
    let reqs = [Requirement {
        ids: &["traction.cauchy_vs_form", "traction.cauchy_vs_adapted", "traction.form_vs_adapted"],
        charts: ADAPTED,
        limit: Limit::Relative(1e-9),
    }];
    run("traction_equiv", &config, &reqs, 50 * 20)
}

fn criterion_5() -> Outcome {
    let all_charts = Requirement {
        ids: &[
            "killing.strain_lie",
            "killing.strain_covariant",
            "killing.stress",
            "killing.expansion",
            "killing.traction_cauchy",
            "killing.traction_form",
            "killing.cn_classical",
            "killing.cn_gradcurl",
            "killing.cn_form",
        ],
        charts: BUILTIN,
        limit: Limit::Absolute(1e-11),
    };
    let adapted = Requirement {
        ids: &["killing.traction_adapted"],
        charts: ADAPTED,
        limit: Limit::Absolute(1e-11),
    };
    run("killing", &sweep(), &[all_charts, adapted], 6)
}

fn criterion_6() -> Outcome {
    let residuals = Requirement {
        ids: &[
            "lame.sphere.cn_classical",
            "lame.sphere.cn_form",
            "lame.sphere.stress_divergence",
        ],
        charts: &[Some(Chart::Spherical), Some(Chart::Cartesian)],
        limit: Limit::Absolute(1e-9),
    };
    let start = Instant::now();
    let mut problems = Vec::new();
    match run_suite("lame", &sweep()) {
        Ok(report) => {
            inspect(&report, &[residuals], 50, &mut problems);
            match report.check("lame.sphere.inner_traction", Some(Chart::Spherical)) {
                Some(rec) => judge(rec, Limit::Relative(1e-8), 1, &mut problems),
                None => problems.push("adapted inner traction missing".into()),
            }
            for rec in report.checks.iter().filter(|c| !c.pass) {
                problems.push(format!("{} on {:?} failed", rec.id, rec.chart));
            }
        }
        Err(e) => problems.push(format!("suite lame did not run: {e}")),
    }
    Outcome {
        problems,
        elapsed: start.elapsed(),
    }
}

fn criterion_7() -> Outcome {
    let reqs = [Requirement {
        ids: &[
            "structural.dd_0form",
            "structural.dd_1form",
            "structural.star_star",
            "structural.sharp_flat",
            "structural.delta_delta",
        ],
        charts: BUILTIN,
        limit: Limit::Any(1e-11),
    }];
    run("structural", &sweep(), &reqs, 100 * 20)
}

fn criterion_8() -> Outcome {
    let reqs = [Requirement {
        ids: &["cross_chart.expansion", "cross_chart.strain_norm", "cross_chart.traction_norm"],
        charts: ADAPTED,
        limit: Limit::Relative(1e-9),
    }];
    run("cross_chart", &sweep(), &reqs, 100 * 20)
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut reports = Vec::new();
    for name in ["first.json", "second.json"] {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_elastoforms"))
            .args(["verify", "--suite", "all", "--seed", "42", "--report"])
            .arg(&path)
            .output()
            .expect("binary runs");
        if !status.status.success() {
            problems.push(format!("{name}: exit status {}", status.status));
        }
        reports.push(fs::read(&path).unwrap_or_default());
    }
    if reports[0].is_empty() {
        problems.push("empty report".into());
    } else if reports[0] != reports[1] {
        problems.push("reports differ".into());
    }
    Outcome {
        problems,
        elapsed: start.elapsed(),
    }
}

#[test]
fn acceptance_criteria() {
    type Criterion = fn() -> Outcome;
    let criteria: [(Criterion, Option<f64>); 9] = [
        (criterion_1, Some(5.0)),
        (criterion_2, Some(10.0)),
        (criterion_3, Some(5.0)),
        (criterion_4, Some(5.0)),
        (criterion_5, Some(2.0)),
        (criterion_6, Some(2.0)),
        (criterion_7, Some(5.0)),
        (criterion_8, Some(5.0)),
        (criterion_9, None),
    ];
    let mut failed = Vec::new();
    for (n, (criterion, budget)) in criteria.iter().enumerate() {
        let n = n + 1;
        let mut outcome = criterion();
        let secs = outcome.elapsed.as_secs_f64();
        if let Some(budget) = budget {
            if secs >= *budget {
                outcome.problems.push(format!("took {secs:.2} s, budget {budget} s"));
            }
        }
        let verdict = if outcome.problems.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} ({secs:.2} s)");
        for p in &outcome.problems {
            println!("    {p}");
        }
        if !outcome.problems.is_empty() {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
