//! Displacement fields used as test vehicles, and their JSON description.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::charts::{pullback_displacement, Chart, FieldFn, Point};
use crate::elasticity::{cn_residual_classical, ElasticModuli};
use crate::error::{Error, Result};
use crate::exterior::VecField;
use crate::jets::Scalar;
use crate::lie::CovTensor2;
use crate::oracle;

/// Highest total degree of a polynomial field. Second-order jets of such
/// fields are exact.
pub const MAX_DEGREE: u8 = 3;

/// One term `c · (q¹)^i (q²)^j (q³)^k` of the component `target_component`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub target_component: usize,
    pub exponents: [u8; 3],
    pub coefficient: f64,
}

/// Thick-walled vessel loaded by an internal pressure `p_i` on `r = a`,
/// traction free on `r = b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LameParams {
    pub a: f64,
    pub b: f64,
    pub p_i: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl LameParams {
    pub fn moduli(&self) -> Result<ElasticModuli> {
        ElasticModuli::new(self.lambda, self.mu)
    }
}

impl Default for LameParams {
    fn default() -> Self {
        LameParams {
            a: 1.0,
            b: 2.0,
            p_i: 1.0,
            lambda: 1.0,
            mu: 1.0,
        }
    }
}

/// Named fields with a known closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// `∇(x³ − 3xy²)`, harmonic and curl free.
    HarmonicGradient,
    /// `(y², z², x²)`, divergence free.
    Solenoidal,
    /// `(x, 0, 0)`.
    Uniaxial,
    /// `(x², 0, 0)`.
    QuadraticX,
    /// `(y, 0, 0)`.
    SimpleShear,
}

impl Preset {
    fn terms(self) -> Vec<Monomial> {
        let t = |target_component, exponents, coefficient| Monomial {
            target_component,
            exponents,
            coefficient,
        };
        match self {
            Preset::HarmonicGradient => vec![
                t(0, [2, 0, 0], 3.0),
                t(0, [0, 2, 0], -3.0),
                t(1, [1, 1, 0], -6.0),
            ],
            Preset::Solenoidal => vec![t(0, [0, 2, 0], 1.0), t(1, [0, 0, 2], 1.0), t(2, [2, 0, 0], 1.0)],
            Preset::Uniaxial => vec![t(0, [1, 0, 0], 1.0)],
            Preset::QuadraticX => vec![t(0, [2, 0, 0], 1.0)],
            Preset::SimpleShear => vec![t(0, [0, 1, 0], 1.0)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum FieldKind {
    Polynomial(Vec<Monomial>),
    RigidTranslation { direction: [f64; 3] },
    /// Infinitesimal rotation `ω × x` about the origin.
    RigidRotation { axis: [f64; 3] },
    Dilation { scale: f64 },
    LameSphere(LameParams),
    /// Plane-strain cylinder with axis `z`.
    LameCylinder(LameParams),
    CustomPreset { name: Preset },
}

/// A field description: components are given in the coordinate basis of
/// `chart` as functions of its coordinates. Rigid motions, dilations and the
/// Lamé fields are written in Cartesian form and require the Cartesian chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(flatten)]
    pub kind: FieldKind,
    #[serde(default = "cartesian")]
    pub chart: Chart,
}

fn cartesian() -> Chart {
    Chart::Cartesian
}

impl FieldSpec {
    pub fn new(kind: FieldKind, chart: Chart) -> FieldSpec {
        FieldSpec { kind, chart }
    }

    pub fn from_json(text: &str) -> Result<FieldSpec> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))
    }

    pub fn label(&self) -> String {
        let kind = match &self.kind {
            FieldKind::Polynomial(terms) => format!("polynomial[{}]", terms.len()),
            FieldKind::RigidTranslation { direction } => format!("rigid_translation{direction:?}"),
            FieldKind::RigidRotation { axis } => format!("rigid_rotation{axis:?}"),
            FieldKind::Dilation { scale } => format!("dilation({scale})"),
            FieldKind::LameSphere(_) => "lame_sphere".to_string(),
            FieldKind::LameCylinder(_) => "lame_cylinder".to_string(),
            FieldKind::CustomPreset { name } => format!("{name:?}"),
        };
        format!("{kind}@{}", self.chart)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Polynomial(Vec<Monomial>),
    /// `M x + c` in Cartesian coordinates.
    Affine { matrix: [[f64; 3]; 3], offset: [f64; 3] },
    /// `(A + B/|x|³) x`.
    LameSphere { a_coef: f64, b_coef: f64 },
    /// `(A + B/ρ²) (x, y, 0)`.
    LameCylinder { a_coef: f64, b_coef: f64 },
}

/// A validated field, ready to be evaluated as second-order jets in any chart.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementField {
    spec: FieldSpec,
    repr: Repr,
}

impl DisplacementField {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// The chart in whose coordinates the components are written.
    pub fn source_chart(&self) -> Chart {
        self.spec.chart
    }

    /// The Lamé constants `(A, B)` if this is a Lamé field.
    pub fn lame_constants(&self) -> Option<(f64, f64)> {
        match self.repr {
            Repr::LameSphere { a_coef, b_coef } | Repr::LameCylinder { a_coef, b_coef } => Some((a_coef, b_coef)),
            _ => None,
        }
    }

    /// The vector field with full second-order jets in the coordinates of
    /// `chart` at `q`.
    pub fn at(&self, chart: Chart, q: Point) -> Result<VecField> {
        pullback_displacement(self.spec.chart, chart, self, q)
    }
}

impl FieldFn for DisplacementField {
    fn components<S: Scalar>(&self, q: [S; 3]) -> Result<[S; 3]> {
        match &self.repr {
            Repr::Polynomial(terms) => Ok(eval_polynomial(terms, q)),
            Repr::Affine { matrix, offset } => Ok(std::array::from_fn(|a| {
                (0..3).fold(S::constant(offset[a]), |acc, b| acc + q[b].scale(matrix[a][b]))
            })),
            Repr::LameSphere { a_coef, b_coef } => {
                let r2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
                let r3 = r2 * r2.sqrt()?;
                let factor = S::constant(*a_coef) + r3.recip()?.scale(*b_coef);
                Ok(q.map(|x| factor * x))
            }
            Repr::LameCylinder { a_coef, b_coef } => {
                let rho2 = q[0] * q[0] + q[1] * q[1];
                let factor = S::constant(*a_coef) + rho2.recip()?.scale(*b_coef);
                Ok([factor * q[0], factor * q[1], S::constant(0.0)])
            }
        }
    }
}

fn eval_polynomial<S: Scalar>(terms: &[Monomial], q: [S; 3]) -> [S; 3] {
    let powers: [[S; 4]; 3] = std::array::from_fn(|k| {
        let x = q[k];
        let x2 = x * x;
        [S::constant(1.0), x, x2, x2 * x]
    });
    let mut out = [S::constant(0.0); 3];
    for t in terms {
        let [i, j, k] = t.exponents.map(usize::from);
        let mono = powers[0][i] * powers[1][j] * powers[2][k];
        out[t.target_component] = out[t.target_component] + mono.scale(t.coefficient);
    }
    out
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

fn require_cartesian(spec: &FieldSpec) -> Result<()> {
    if spec.chart == Chart::Cartesian {
        Ok(())
    } else {
        Err(invalid(format!(
            "{} is written in Cartesian form; chart must be cartesian, found {}",
            spec.label(),
            spec.chart
        )))
    }
}

fn finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(invalid(format!("{what} must be finite")))
    }
}

fn validate_terms(terms: &[Monomial]) -> Result<()> {
    for t in terms {
        if t.target_component > 2 {
            return Err(invalid(format!("target_component {} out of range", t.target_component)));
        }
        let degree: u32 = t.exponents.iter().map(|&e| u32::from(e)).sum();
        if degree > u32::from(MAX_DEGREE) {
            return Err(invalid(format!(
                "monomial {:?} has degree {degree} > {MAX_DEGREE}",
                t.exponents
            )));
        }
        finite(&[t.coefficient], "coefficient")?;
    }
    Ok(())
}

fn validate_lame(p: &LameParams) -> Result<ElasticModuli> {
    finite(&[p.a, p.b, p.p_i], "Lamé parameters")?;
    if !(0.0 < p.a && p.a < p.b) {
        return Err(invalid(format!("Lamé radii need 0 < a < b, got a = {}, b = {}", p.a, p.b)));
    }
    p.moduli().map_err(|e| invalid(e.to_string()))
}

/// Sphere: `u_r = A r + B/r²` with `σ_rr(a) = −p_i`, `σ_rr(b) = 0`.
fn lame_sphere_constants(p: &LameParams) -> (f64, f64) {
    let (a3, b3) = (p.a.powi(3), p.b.powi(3));
    let a_coef = p.p_i * a3 / ((3.0 * p.lambda + 2.0 * p.mu) * (b3 - a3));
    let b_coef = p.p_i * a3 * b3 / (4.0 * p.mu * (b3 - a3));
    (a_coef, b_coef)
}

/// Plane-strain cylinder: `u_r = A r + B/r` with the same boundary data.
fn lame_cylinder_constants(p: &LameParams) -> (f64, f64) {
    let (a2, b2) = (p.a * p.a, p.b * p.b);
    let a_coef = p.p_i * a2 / (2.0 * (p.lambda + p.mu) * (b2 - a2));
    let b_coef = p.p_i * a2 * b2 / (2.0 * p.mu * (b2 - a2));
    (a_coef, b_coef)
}

/// Residual and boundary-stress tolerance of the Lamé oracle gate.
pub const LAME_GATE_TOLERANCE: f64 = 1e-9;

/// Checks Lamé constants with the classical oracle: zero Cauchy–Navier
/// residual inside the wall and `σ(n, n) = −p_i`, `0` on the two surfaces.
fn lame_gate(field: &DisplacementField, p: &LameParams, moduli: &ElasticModuli) -> Result<()> {
    // unit radial direction and an offset along the cylinder axis
    let (n, z_offset) = match field.repr {
        Repr::LameCylinder { .. } => ([0.6, 0.8, 0.0], 0.7),
        _ => ([0.48, 0.6, 0.64], 0.0),
    };
    let point = |r: f64| [r * n[0], r * n[1], r * n[2] + z_offset];
    let scale = p.p_i.abs().max(1.0);
    for k in 1..=5 {
        let r = p.a + (p.b - p.a) * f64::from(k) / 6.0;
        let x = point(r);
        let m = Chart::Cartesian.metric_at(x)?;
        let v = field.at(Chart::Cartesian, x)?;
        let residual = cn_residual_classical(moduli, &m, &v)?.values();
        let worst = residual.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()));
        if worst > LAME_GATE_TOLERANCE * scale {
            return Err(invalid(format!(
                "Lamé constants fail the oracle residual gate at r = {r}: {worst:e}"
            )));
        }
    }
    for (r, expected) in [(p.a, -p.p_i), (p.b, 0.0)] {
        let x = point(r);
        let m = Chart::Cartesian.metric_at(x)?;
        let v = field.at(Chart::Cartesian, x)?;
        let sigma: CovTensor2 = oracle::stress_classical(moduli, &m, &v)?;
        let s = sigma.values();
        let normal_stress: f64 = (0..3).map(|i| (0..3).map(|j| n[i] * s[i][j] * n[j]).sum::<f64>()).sum();
        if (normal_stress - expected).abs() > LAME_GATE_TOLERANCE * scale {
            return Err(invalid(format!(
                "Lamé constants fail the boundary gate at r = {r}: σ_rr = {normal_stress}, expected {expected}"
            )));
        }
    }
    Ok(())
}

/// Validates `spec` and builds the field. Lamé constants are only returned
/// after passing the oracle gate.
pub fn make_field(spec: &FieldSpec) -> Result<DisplacementField> {
    let repr = match &spec.kind {
        FieldKind::Polynomial(terms) => {
            validate_terms(terms)?;
            Repr::Polynomial(terms.clone())
        }
        FieldKind::CustomPreset { name } => Repr::Polynomial(name.terms()),
        FieldKind::RigidTranslation { direction } => {
            require_cartesian(spec)?;
            finite(direction, "direction")?;
            Repr::Affine {
                matrix: [[0.0; 3]; 3],
                offset: *direction,
            }
        }
        FieldKind::RigidRotation { axis: w } => {
            require_cartesian(spec)?;
            finite(w, "axis")?;
            Repr::Affine {
                matrix: [[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]],
                offset: [0.0; 3],
            }
        }
        FieldKind::Dilation { scale } => {
            require_cartesian(spec)?;
            finite(&[*scale], "scale")?;
            Repr::Affine {
                matrix: std::array::from_fn(|i| std::array::from_fn(|j| if i == j { *scale } else { 0.0 })),
                offset: [0.0; 3],
            }
        }
        FieldKind::LameSphere(p) | FieldKind::LameCylinder(p) => {
            require_cartesian(spec)?;
            let moduli = validate_lame(p)?;
            let sphere = matches!(spec.kind, FieldKind::LameSphere(_));
            let (a_coef, b_coef) = if sphere {
                lame_sphere_constants(p)
            } else {
                lame_cylinder_constants(p)
            };
            let repr = if sphere {
                Repr::LameSphere { a_coef, b_coef }
            } else {
                Repr::LameCylinder { a_coef, b_coef }
            };
            let field = DisplacementField {
                spec: spec.clone(),
                repr,
            };
            lame_gate(&field, p, &moduli)?;
            return Ok(field);
        }
    };
    Ok(DisplacementField {
        spec: spec.clone(),
        repr,
    })
}

/// All monomials of total degree ≤ 3 in three variables, in a fixed order.
pub fn monomial_exponents() -> Vec<[u8; 3]> {
    let mut out = Vec::with_capacity(20);
    for degree in 0..=MAX_DEGREE {
        for i in (0..=degree).rev() {
            for j in (0..=degree - i).rev() {
                out.push([i, j, degree - i - j]);
            }
        }
    }
    out
}

/// A dense random polynomial field of degree ≤ 3 in `chart`, coefficients
/// uniform in `[−1, 1]`.
pub fn random_polynomial<R: Rng>(rng: &mut R, chart: Chart) -> FieldSpec {
    let exps = monomial_exponents();
    let mut terms = Vec::with_capacity(3 * exps.len());
    for target_component in 0..3 {
        for &exponents in &exps {
            terms.push(Monomial {
                target_component,
                exponents,
                coefficient: rng.gen_range(-1.0..=1.0),
            });
        }
    }
    FieldSpec::new(FieldKind::Polynomial(terms), chart)
}

/// The six generators of rigid motions: three translations, three rotations.
pub fn rigid_generators() -> Vec<FieldSpec> {
    let e = |k: usize| std::array::from_fn(|i| if i == k { 1.0 } else { 0.0 });
    let mut out: Vec<FieldSpec> = (0..3)
        .map(|k| FieldSpec::new(FieldKind::RigidTranslation { direction: e(k) }, Chart::Cartesian))
        .collect();
    out.extend((0..3).map(|k| FieldSpec::new(FieldKind::RigidRotation { axis: e(k) }, Chart::Cartesian)));
    out
}
