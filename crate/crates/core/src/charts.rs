//! Curvilinear charts of E³ and the metric geometry they induce.
//!
//! A chart is given by its embedding into Cartesian coordinates. The metric
//! `g = DΦᵀ DΦ`, its inverse, its derivatives and the Christoffel symbols are
//! derived mechanically by evaluating the embedding on third-order jets, so
//! no chart carries hand-written metric formulas.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::VecField;
use crate::jets::{Jet2, Jet3, Scalar, EPS_SING};

/// Derivative orders carried by every metric component.
pub const METRIC_ORDER: u8 = 2;

pub type Point = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];
pub type Tensor3 = [[[f64; 3]; 3]; 3];

/// Builtin coordinate systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Cartesian,
    /// `(r, θ, z)`, regular for `r > 0`.
    Cylindrical,
    /// `(r, θ, φ)` with polar angle `θ ∈ (0, π)`, regular for `r > 0`.
    Spherical,
    /// Affine chart with a constant, non-diagonal metric.
    Oblique,
    /// Polynomial non-orthogonal chart `(q¹ + 0.3 q²², q², q³ + 0.2 q¹q²)`.
    /// Its metric has nonzero first and second derivatives everywhere.
    Warped,
}

/// Classification of a coordinate tuple with respect to a chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Regular,
    Singular,
    OutOfDomain,
}

impl Chart {
    /// The three charts every sweep runs over by default.
    pub const BUILTIN: [Chart; 3] = [Chart::Cartesian, Chart::Cylindrical, Chart::Spherical];
    pub const ALL: [Chart; 5] = [
        Chart::Cartesian,
        Chart::Cylindrical,
        Chart::Spherical,
        Chart::Oblique,
        Chart::Warped,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Chart::Cartesian => "cartesian",
            Chart::Cylindrical => "cylindrical",
            Chart::Spherical => "spherical",
            Chart::Oblique => "oblique",
            Chart::Warped => "warped",
        }
    }

    pub fn coordinate_names(self) -> [&'static str; 3] {
        match self {
            Chart::Cartesian => ["x", "y", "z"],
            Chart::Cylindrical => ["r", "theta", "z"],
            Chart::Spherical => ["r", "theta", "phi"],
            Chart::Oblique | Chart::Warped => ["q1", "q2", "q3"],
        }
    }

    /// Index of a coordinate `r` with `g_rr ≡ 1` and `g_r,other ≡ 0`, if any.
    pub fn unit_radial(self) -> Option<usize> {
        match self {
            Chart::Cylindrical | Chart::Spherical => Some(0),
            _ => None,
        }
    }

    pub fn classify(self, q: Point) -> PointClass {
        if q.iter().any(|c| !c.is_finite()) {
            return PointClass::OutOfDomain;
        }
        let in_range = match self {
            Chart::Cylindrical => q[0] >= 0.0,
            Chart::Spherical => q[0] >= 0.0 && (0.0..=std::f64::consts::PI).contains(&q[1]),
            _ => true,
        };
        if !in_range {
            return PointClass::OutOfDomain;
        }
        let det = det3(&jacobian(self, q));
        if det * det > EPS_SING {
            PointClass::Regular
        } else {
            PointClass::Singular
        }
    }

    pub fn check_regular(self, q: Point) -> Result<()> {
        match self.classify(q) {
            PointClass::Regular => Ok(()),
            PointClass::Singular => Err(Error::SingularPoint { chart: self, point: q }),
            PointClass::OutOfDomain => Err(Error::OutOfDomain { chart: self, point: q }),
        }
    }

    /// The embedding `Φ: chart coordinates → Cartesian coordinates`.
    pub fn embed<S: Scalar>(self, q: [S; 3]) -> [S; 3] {
        let [a, b, c] = q;
        match self {
            Chart::Cartesian => q,
            Chart::Cylindrical => [a * b.cos(), a * b.sin(), c],
            Chart::Spherical => {
                let rho = a * b.sin();
                [rho * c.cos(), rho * c.sin(), a * b.cos()]
            }
            Chart::Oblique => [a + b.scale(0.5), b + c.scale(0.3), c],
            Chart::Warped => [a + (b * b).scale(0.3), b, c + (a * b).scale(0.2)],
        }
    }

    /// The inverse map `Cartesian → chart coordinates`, on any scalar type.
    /// Angles are returned in their principal ranges.
    pub fn invert<S: Scalar>(self, x: [S; 3]) -> Result<[S; 3]> {
        let [a, b, c] = x;
        let out = match self {
            Chart::Cartesian => x,
            Chart::Cylindrical => {
                let rho = (a * a + b * b).sqrt()?;
                [rho, S::atan2(b, a)?, c]
            }
            Chart::Spherical => {
                let rho2 = a * a + b * b;
                let rho = rho2.sqrt()?;
                let r = (rho2 + c * c).sqrt()?;
                [r, S::atan2(rho, c)?, S::atan2(b, a)?]
            }
            Chart::Oblique => {
                let q2 = b - c.scale(0.3);
                [a - q2.scale(0.5), q2, c]
            }
            Chart::Warped => {
                let q1 = a - (b * b).scale(0.3);
                [q1, b, c - (q1 * b).scale(0.2)]
            }
        };
        Ok(out)
    }

    pub fn to_cartesian(self, q: Point) -> Result<Point> {
        self.check_regular(q)?;
        Ok(self.embed(q))
    }

    pub fn from_cartesian(self, x: Point) -> Result<Point> {
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::OutOfDomain { chart: self, point: x });
        }
        let q = self.invert(x).map_err(|e| match e {
            Error::SingularJet { .. } => Error::SingularPoint { chart: self, point: x },
            other => other,
        })?;
        self.check_regular(q)?;
        Ok(q)
    }

    /// Metric, inverse metric, metric derivatives, volume density and
    /// Christoffel symbols at `q`.
    pub fn metric_at(self, q: Point) -> Result<MetricAtPoint> {
        self.check_regular(q)?;
        let x = self.embed(Jet3::seeds(q));
        // ∂_i Φ^a as full 2-jets
        let tangent: [[Jet2; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|a| x[a].partial(i)));
        let g_jet: [[Jet2; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|a| tangent[i][a] * tangent[j][a]).sum())
        });
        let det = det3_jet(&g_jet);
        if det.value <= EPS_SING {
            return Err(Error::SingularPoint { chart: self, point: q });
        }
        let g_inv_jet = invert3_jet(&g_jet, det)?;
        let sqrt_det_jet = det.sqrt()?;

        let g = g_jet.map(|r| r.map(|j| j.value));
        let g_inv = g_inv_jet.map(|r| r.map(|j| j.value));
        let dg: Tensor3 = std::array::from_fn(|i| std::array::from_fn(|j| g_jet[i][j].grad));
        let gamma_jet = christoffel_jets(&g_jet, &g_inv_jet);
        let mut m = MetricAtPoint {
            site: Site { chart: self, point: q },
            g,
            g_inv,
            dg,
            sqrt_det: sqrt_det_jet.value,
            gamma: [[[0.0; 3]; 3]; 3],
            g_jet,
            g_inv_jet,
            sqrt_det_jet,
            gamma_jet,
        };
        m.gamma = christoffel(&m);
        Ok(m)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Chart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Chart> {
        Chart::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownChart(s.to_string()))
    }
}

/// The chart and coordinates an object is evaluated at. Binary operations
/// require matching sites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Site {
    pub chart: Chart,
    pub point: Point,
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.point;
        write!(f, "{}@({a}, {b}, {c})", self.chart)
    }
}

pub(crate) fn ensure_site(left: &Site, right: &Site) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::TagMismatch { left: *left, right: *right })
    }
}

/// Metric geometry of a chart at one regular point.
#[derive(Clone, Debug)]
pub struct MetricAtPoint {
    pub site: Site,
    /// `g_ij`
    pub g: Mat3,
    /// `g^ij`
    pub g_inv: Mat3,
    /// `dg[i][j][k] = ∂_k g_ij`
    pub dg: Tensor3,
    /// `√det g`
    pub sqrt_det: f64,
    /// `gamma[k][i][j] = Γ^k_ij`
    pub gamma: Tensor3,
    g_jet: [[Jet2; 3]; 3],
    g_inv_jet: [[Jet2; 3]; 3],
    sqrt_det_jet: Jet2,
    gamma_jet: [[[Jet2; 3]; 3]; 3],
}

impl MetricAtPoint {
    /// `g_ij` with its first and second derivatives.
    pub fn g_jet(&self, i: usize, j: usize) -> Jet2 {
        self.g_jet[i][j]
    }

    pub fn g_inv_jet(&self, i: usize, j: usize) -> Jet2 {
        self.g_inv_jet[i][j]
    }

    pub fn sqrt_det_jet(&self) -> Jet2 {
        self.sqrt_det_jet
    }

    /// `Γ^k_ij` with its first derivatives (one derivative order).
    pub fn gamma_jet(&self, k: usize, i: usize, j: usize) -> Jet2 {
        self.gamma_jet[k][i][j]
    }

    pub fn chart(&self) -> Chart {
        self.site.chart
    }

    /// `true` when the metric is diagonal at this point, so physical
    /// components are obtained by scaling with `√g_ii`.
    pub fn is_orthogonal(&self) -> bool {
        let scale = self.g.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
        (0..3).all(|i| (0..3).all(|j| i == j || self.g[i][j].abs() <= 1e-14 * scale))
    }
}

/// Christoffel symbols of the second kind,
/// `Γ^k_ij = ½ g^km (g_im,j + g_jm,i − g_ij,m)`.
pub fn christoffel(m: &MetricAtPoint) -> Tensor3 {
    let dg = &m.dg;
    std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                0.5 * (0..3)
                    .map(|l| m.g_inv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[i][j][l]))
                    .sum::<f64>()
            })
        })
    })
}

fn christoffel_jets(g: &[[Jet2; 3]; 3], g_inv: &[[Jet2; 3]; 3]) -> [[[Jet2; 3]; 3]; 3] {
    // first kind, [ij, l] = ½ (g_il,j + g_jl,i − g_ij,l)
    let first: [[[Jet2; 3]; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|l| (g[i][l].partial(j) + g[j][l].partial(i) - g[i][j].partial(l)).scale(0.5))
        })
    });
    std::array::from_fn(|k| {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|l| g_inv[k][l] * first[i][j][l]).sum()))
    })
}

/// Jacobian `∂Φ^a/∂q^i` of the embedding, indexed `[a][i]`.
pub fn jacobian(chart: Chart, q: Point) -> Mat3 {
    let x = chart.embed(Jet2::seeds(q));
    x.map(|xa| xa.grad)
}

pub fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det3_jet(m: &[[Jet2; 3]; 3]) -> Jet2 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn invert3_jet(m: &[[Jet2; 3]; 3], det: Jet2) -> Result<[[Jet2; 3]; 3]> {
    let inv_det = det.recip()?;
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    // adjugate: inv[i][j] = cofactor(j, i) / det
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    Ok(adj.map(|r| r.map(|a| a * inv_det)))
}

/// A vector field given by its components in some chart's coordinate basis,
/// as functions of that chart's coordinates.
pub trait FieldFn {
    fn components<S: Scalar>(&self, q: [S; 3]) -> Result<[S; 3]>;
}

/// Field with constant components in its chart's coordinate basis (for
/// example `∂_r`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantField(pub [f64; 3]);

impl FieldFn for ConstantField {
    fn components<S: Scalar>(&self, _q: [S; 3]) -> Result<[S; 3]> {
        Ok(self.0.map(S::constant))
    }
}

/// Represents the field `field`, defined in chart `src`, in the coordinate
/// basis of chart `dst` at `p_dst`, with full second-order jets in the `dst`
/// coordinates.
pub fn pullback_displacement<F: FieldFn>(src: Chart, dst: Chart, field: &F, p_dst: Point) -> Result<VecField> {
    dst.check_regular(p_dst)?;
    let site = Site { chart: dst, point: p_dst };
    if src == dst {
        let comps = field.components(Jet2::seeds(p_dst))?;
        return Ok(VecField::new(site, comps, 2));
    }
    let x = dst.embed(Jet3::seeds(p_dst));
    let x_values = x.map(|c| c.value);
    let q_src = src.invert(x).map_err(|e| match e {
        Error::SingularJet { .. } => Error::SingularPoint { chart: src, point: x_values },
        other => other,
    })?;
    src.check_regular(q_src.map(|c| c.value))?;
    // ∂q_src^a / ∂q_dst^b
    let transition: [[Jet2; 3]; 3] = std::array::from_fn(|a| std::array::from_fn(|b| q_src[a].partial(b)));
    let det = det3_jet(&transition);
    let inverse = invert3_jet(&transition, det).map_err(|_| Error::SingularPoint { chart: dst, point: p_dst })?;
    let v_src = field.components(q_src.map(|c| c.truncate()))?;
    let comps = std::array::from_fn(|i| (0..3).map(|a| inverse[i][a] * v_src[a]).sum());
    Ok(VecField::new(site, comps, 2))
}

/// Cartesian components of a vector given in a chart's coordinate basis.
pub fn push_to_cartesian(v: &VecField) -> [f64; 3] {
    let j = jacobian(v.site().chart, v.site().point);
    let vals = v.values();
    std::array::from_fn(|a| (0..3).map(|i| j[a][i] * vals[i]).sum())
}
