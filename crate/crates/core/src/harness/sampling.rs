//! Sweep configuration, seeded random streams and chart sampling boxes.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::charts::{Chart, Point};
use crate::elasticity::ElasticModuli;
use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_POINTS: usize = 20;
pub const DEFAULT_FIELDS: usize = 100;
pub const DEFAULT_MODULI: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Evaluation points per field and chart.
    pub points: usize,
    /// Random fields per chart.
    pub fields: usize,
    /// Random `(λ, μ)` pairs for the residual sweeps.
    pub moduli: usize,
    /// Replaces every relative tolerance when set.
    pub tol_rel: Option<f64>,
    pub charts: Vec<Chart>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            points: DEFAULT_POINTS,
            fields: DEFAULT_FIELDS,
            moduli: DEFAULT_MODULI,
            tol_rel: None,
            charts: Chart::BUILTIN.to_vec(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.points == 0 || self.fields == 0 || self.moduli == 0 {
            return bad("points, fields and moduli must be positive".into());
        }
        if self.charts.is_empty() {
            return bad("at least one chart is required".into());
        }
        let mut seen = self.charts.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.charts.len() {
            return bad("charts must not repeat".into());
        }
        if let Some(t) = self.tol_rel {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("tol_rel must be positive and finite, got {t}"));
            }
        }
        Ok(())
    }

    /// A random stream for one `(suite, chart)` work item. Streams are
    /// independent, so a suite's samples do not depend on which other
    /// suites run alongside it.
    pub fn rng(&self, suite_index: usize, chart: Option<Chart>) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let chart_slot = chart.map_or(0, |c| 1 + Chart::ALL.iter().position(|&x| x == c).unwrap_or(0));
        rng.set_stream((suite_index * 16 + chart_slot) as u64);
        rng
    }
}

/// Coordinate box that sweeps sample from, bounded away from singular sets.
pub fn sampling_box(chart: Chart) -> [(f64, f64); 3] {
    match chart {
        Chart::Cylindrical => [(0.5, 3.0), (-PI, PI), (-2.0, 2.0)],
        Chart::Spherical => [(0.5, 3.0), (0.4, PI - 0.4), (-PI, PI)],
        Chart::Cartesian | Chart::Oblique | Chart::Warped => [(-2.0, 2.0); 3],
    }
}

pub fn sample_point<R: Rng>(rng: &mut R, chart: Chart) -> Point {
    sampling_box(chart).map(|(lo, hi)| rng.gen_range(lo..hi))
}

/// A point for surface checks together with the chart whose `∂_r` is the
/// surface normal there. Cylindrical and spherical points use their own
/// radial coordinate; other charts take a spherical sample mapped into them.
pub fn sample_surface_point<R: Rng>(rng: &mut R, chart: Chart) -> Result<(Point, Chart)> {
    if chart.unit_radial().is_some() {
        return Ok((sample_point(rng, chart), chart));
    }
    let q = sample_point(rng, Chart::Spherical);
    let x = Chart::Spherical.to_cartesian(q)?;
    Ok((chart.from_cartesian(x)?, Chart::Spherical))
}

/// Random moduli with `μ ∈ [0.2, 3]` and `λ ∈ [−0.6 μ, 3]`, which keeps the
/// bulk modulus positive.
pub fn random_moduli<R: Rng>(rng: &mut R) -> ElasticModuli {
    let mu = rng.gen_range(0.2..=3.0);
    let lambda = rng.gen_range(-0.6 * mu..=3.0);
    ElasticModuli { lambda, mu }
}
