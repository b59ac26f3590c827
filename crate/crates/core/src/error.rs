use thiserror::Error;

use crate::charts::{Chart, Site};

/// Errors raised by the kernel and the verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A reciprocal or square root was requested at (or numerically at) zero.
    #[error("singular jet in `{op}`: value {value:e} is within the singularity guard")]
    SingularJet { op: &'static str, value: f64 },

    #[error("axis index {0} out of range (expected 0, 1 or 2)")]
    AxisOutOfRange(usize),

    #[error("point {point:?} lies on the singular set of the {chart} chart")]
    SingularPoint { chart: Chart, point: [f64; 3] },

    #[error("point {point:?} is outside the coordinate domain of the {chart} chart")]
    OutOfDomain { chart: Chart, point: [f64; 3] },

    #[error("operands are tagged with different sites: {left} vs {right}")]
    TagMismatch { left: Site, right: Site },

    #[error("`{op}` needs {needed} derivative order(s) but only {available} remain")]
    DerivativeBudgetExceeded {
        op: &'static str,
        needed: u8,
        available: u8,
    },

    #[error("degree overflow: a {left}-form and a {right}-form do not fit in three dimensions")]
    DegreeOverflow { left: u8, right: u8 },

    #[error("`{op}` expects a {expected}-form, got a {found}-form")]
    DegreeMismatch {
        op: &'static str,
        expected: &'static str,
        found: u8,
    },

    #[error("vector field is not the index-raised one-form (max relative deviation {deviation:e})")]
    InconsistentPair { deviation: f64 },

    #[error("boundary normal is not unit length: g(n, n) = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("chart {chart} has no unit radial coordinate at index {requested}")]
    ChartNotAdapted { chart: Chart, requested: usize },

    #[error("invalid elastic moduli: lambda = {lambda}, mu = {mu}")]
    InvalidModuli { lambda: f64, mu: f64 },

    #[error("invalid field spec: {0}")]
    InvalidSpec(String),

    #[error("unknown chart `{0}`")]
    UnknownChart(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown operation `{0}`")]
    UnknownOp(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
