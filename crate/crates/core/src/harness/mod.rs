//! Test-vehicle fields, randomized sweeps, reports and single-point
//! evaluation. The command-line front end is a thin layer over this module.

pub mod eval;
pub mod fields;
pub mod registry;
pub mod report;
pub mod sampling;
pub mod suites;

pub use eval::{eval_op, EvalOptions, EvalOutput, Quantity, OPS};
pub use fields::{make_field, DisplacementField, FieldKind, FieldSpec, LameParams, Monomial, Preset};
pub use report::{CheckRecord, SuiteReport, Tolerance};
pub use sampling::SuiteConfig;
pub use suites::{run_suite, SUITES};
