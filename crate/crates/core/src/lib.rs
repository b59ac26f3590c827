//! Exterior-calculus kernel for static linear elasticity in curvilinear
//! charts of E³.
//!
//! The crate evaluates the Cauchy–Navier operator, strain, stress and
//! surface traction through differential forms and Lie derivatives, and
//! checks each of them pointwise against a classical index-tensor oracle.
//!
//! - [`jets`]: second-order Taylor arithmetic, the numeric carrier.
//! - [`charts`]: coordinate systems and their metric geometry.
//! - [`exterior`]: forms, `d`, `⋆`, `δ`, `♭`/`♯`.
//! - [`lie`]: Lie brackets and Lie derivatives.
//! - [`elasticity`]: strain, stress, residuals and tractions.
//! - [`oracle`]: classical reference operators.
//! - [`harness`]: test fields, verification suites and reports.

pub mod charts;
pub mod elasticity;
pub mod error;
pub mod exterior;
pub mod harness;
pub mod jets;
pub mod lie;
pub mod oracle;

pub use charts::{Chart, MetricAtPoint, Site};
pub use elasticity::{BoundaryPoint, ElasticModuli};
pub use error::{Error, Result};
pub use exterior::{KForm, VecField};
pub use jets::Jet2;
pub use lie::CovTensor2;
