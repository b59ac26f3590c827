//! Every invariant in the registry is executed by its suite, and reports are
//! reproducible.

use std::collections::BTreeMap;

use elastoforms::harness::registry::INVARIANTS;
use elastoforms::harness::{run_suite, SuiteConfig, SuiteReport, SUITES};
use elastoforms::Chart;

fn small() -> SuiteConfig {
    SuiteConfig {
        points: 3,
        fields: 4,
        moduli: 2,
        ..SuiteConfig::default()
    }
}

#[test]
fn every_invariant_is_exercised_and_passes() {
    let mut reports: BTreeMap<&str, SuiteReport> = BTreeMap::new();
    for inv in INVARIANTS {
        for (suite, id) in inv.coverage {
            let report = reports
                .entry(suite)
                .or_insert_with(|| run_suite(suite, &small()).unwrap());
            let records: Vec<_> = report.checks.iter().filter(|c| c.id == *id).collect();
            assert!(!records.is_empty(), "{} [{}]: {id} not produced by {suite}", inv.module, inv.statement);
            for rec in records {
                assert!(rec.samples > 0, "{id} on {:?} has no samples", rec.chart);
                assert!(rec.pass, "{id} on {:?} failed: {rec:?}", rec.chart);
            }
        }
    }
}

#[test]
fn registry_names_only_known_suites() {
    for inv in INVARIANTS {
        for (suite, _) in inv.coverage {
            assert!(SUITES.contains(suite), "{suite}");
        }
    }
}

#[test]
fn same_seed_gives_identical_json() {
    let config = small();
    let first = run_suite("all", &config).unwrap().to_json();
    let second = run_suite("all", &config).unwrap().to_json();
    assert_eq!(first, second);
}

#[test]
fn different_seed_changes_sampled_errors() {
    let a = run_suite("bridge", &small()).unwrap();
    let b = run_suite("bridge", &SuiteConfig { seed: 7, ..small() }).unwrap();
    assert_eq!(a.checks.len(), b.checks.len());
    assert_ne!(a.to_json(), b.to_json());
}

#[test]
fn report_round_trips_through_json() {
    let report = run_suite("killing", &small()).unwrap();
    let parsed: SuiteReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(parsed, report);
}

#[test]
fn all_suite_contains_every_component_suite() {
    let all = run_suite("all", &small()).unwrap();
    for prefix in ["jets.", "structural.", "bridge.", "strain.", "lie.", "cn.", "traction.", "killing.", "cross_chart.", "lame."] {
        assert!(all.checks_with_prefix(prefix).count() > 0, "{prefix}");
    }
    assert!(all.check("bridge.curl", Some(Chart::Spherical)).is_some());
}

#[test]
fn chart_selection_restricts_the_sweep() {
    let config = SuiteConfig {
        charts: vec![Chart::Oblique, Chart::Warped],
        ..small()
    };
    let report = run_suite("bridge", &config).unwrap();
    assert!(report.all_passed());
    assert!(report.checks.iter().all(|c| matches!(c.chart, Some(Chart::Oblique | Chart::Warped))));
}
