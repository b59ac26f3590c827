//! Single-point evaluation of public operations, printed as component tables.

use std::fmt;

use serde::Serialize;

use crate::charts::{christoffel, pullback_displacement, Chart, ConstantField, MetricAtPoint, Point};
use crate::elasticity::{
    cn_residual_classical, cn_residual_form, cn_residual_gradcurl, navier_operator, strain_covariant, strain_lie,
    stress, traction_adapted, traction_cauchy, traction_form, volume_expansion, BoundaryPoint, ElasticModuli,
};
use crate::error::{Error, Result};
use crate::exterior::{curl, divergence, flat, VecField};
use crate::harness::fields::FieldSpec;
use crate::harness::make_field;
use crate::lie::CovTensor2;
use crate::oracle;

/// Operation names accepted by [`eval_op`], with a short description.
pub const OPS: [(&str, &str); 20] = [
    ("metric", "metric tensor g_ij"),
    ("christoffel", "Christoffel symbols Γ^k_ij"),
    ("displacement", "displacement vector v^i"),
    ("flat", "displacement one-form u_i"),
    ("expansion", "volume expansion e = −δu"),
    ("divergence", "⋆d⋆u"),
    ("curl", "♯⋆du"),
    ("strain", "½ L_v g"),
    ("strain_covariant", "½(u_i|j + u_j|i)"),
    ("stress", "−λ δu g + μ L_v g"),
    ("navier_operator", "(λ+2μ) dδu + μ δdu"),
    ("cn_residual", "Cauchy–Navier residual, form route"),
    ("cn_residual_gradcurl", "Cauchy–Navier residual, grad/curl route"),
    ("cn_residual_classical", "Cauchy–Navier residual, classical route"),
    ("vector_laplacian", "classical Δv"),
    ("stress_divergence", "classical ∇·σ"),
    ("traction_cauchy", "σ(n̄, ·)"),
    ("traction_form", "−λ δu n + μ(d(v⌟n) + v⌟dn + [n̄, v]♭)"),
    ("traction_adapted", "traction on r = const with normal ∂_r"),
    ("lame_constants", "constants A, B of a Lamé field"),
];

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "components", rename_all = "snake_case")]
pub enum Quantity {
    Scalar(f64),
    Vector([f64; 3]),
    Covector([f64; 3]),
    Tensor([[f64; 3]; 3]),
    /// `[k][i][j]` for `Γ^k_ij`.
    Connection([[[f64; 3]; 3]; 3]),
    Pair([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalOutput {
    pub op: String,
    pub chart: Chart,
    pub point: Point,
    pub coordinate: Quantity,
    /// Components in the normalized coordinate frame, for orthogonal charts.
    pub physical: Option<Quantity>,
}

/// Optional inputs of [`eval_op`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalOptions {
    /// Unit normal components in the evaluation chart's coordinate basis.
    /// Without it, traction uses `∂_r` of the chart, or of spherical
    /// coordinates when the chart has no unit radial coordinate.
    pub normal: Option<[f64; 3]>,
}

fn physical(m: &MetricAtPoint, q: &Quantity) -> Option<Quantity> {
    if !m.is_orthogonal() {
        return None;
    }
    let h: [f64; 3] = std::array::from_fn(|i| m.g[i][i].sqrt());
    Some(match q {
        Quantity::Scalar(s) => Quantity::Scalar(*s),
        Quantity::Vector(v) => Quantity::Vector(std::array::from_fn(|i| v[i] * h[i])),
        Quantity::Covector(w) => Quantity::Covector(std::array::from_fn(|i| w[i] / h[i])),
        Quantity::Tensor(t) => Quantity::Tensor(std::array::from_fn(|i| std::array::from_fn(|j| t[i][j] / (h[i] * h[j])))),
        Quantity::Connection(_) | Quantity::Pair(_) => return None,
    })
}

fn covector(values: Vec<f64>) -> Quantity {
    Quantity::Covector(std::array::from_fn(|i| values[i]))
}

fn tensor(t: &CovTensor2) -> Quantity {
    Quantity::Tensor(t.values())
}

fn normal(m: &MetricAtPoint, chart: Chart, q: Point, opts: &EvalOptions) -> Result<BoundaryPoint> {
    if let Some(n) = opts.normal {
        return BoundaryPoint::new(m, VecField::new(m.site, n.map(crate::jets::Jet2::constant), 2));
    }
    match chart.unit_radial() {
        Some(r) => BoundaryPoint::adapted(m, r),
        None => {
            let n = pullback_displacement(Chart::Spherical, chart, &ConstantField([1.0, 0.0, 0.0]), q)?;
            BoundaryPoint::new(m, n)
        }
    }
}

/// Evaluates `op` for `field` in `chart` at `q`.
pub fn eval_op(
    op: &str,
    field: &FieldSpec,
    chart: Chart,
    q: Point,
    moduli: &ElasticModuli,
    opts: &EvalOptions,
) -> Result<EvalOutput> {
    if !OPS.iter().any(|(name, _)| *name == op) {
        return Err(Error::UnknownOp(op.to_string()));
    }
    let moduli = ElasticModuli::new(moduli.lambda, moduli.mu)?;
    let field = make_field(field)?;
    let m = chart.metric_at(q)?;
    let v = field.at(chart, q)?;
    let u = flat(&m, &v)?;
    let coordinate = match op {
        "metric" => Quantity::Tensor(m.g),
        "christoffel" => Quantity::Connection(christoffel(&m)),
        "displacement" => Quantity::Vector(v.values()),
        "flat" => covector(u.values()),
        "expansion" => Quantity::Scalar(volume_expansion(&m, &u)?.values()[0]),
        "divergence" => Quantity::Scalar(divergence(&m, &v)?.values()[0]),
        "curl" => Quantity::Vector(curl(&m, &v)?.values()),
        "strain" => tensor(&strain_lie(&m, &v)?),
        "strain_covariant" => tensor(&strain_covariant(&m, &u)?),
        "stress" => tensor(&stress(&moduli, &m, &u, &v)?),
        "navier_operator" => covector(navier_operator(&moduli, &m, &u)?.values()),
        "cn_residual" => covector(cn_residual_form(&moduli, &m, &u)?.values()),
        "cn_residual_gradcurl" => covector(cn_residual_gradcurl(&moduli, &m, &u)?.values()),
        "cn_residual_classical" => Quantity::Vector(cn_residual_classical(&moduli, &m, &v)?.values()),
        "vector_laplacian" => Quantity::Vector(oracle::vector_laplacian(&m, &v)?.values()),
        "stress_divergence" => {
            let sigma = oracle::stress_classical(&moduli, &m, &v)?;
            covector(oracle::stress_divergence(&m, &sigma)?.values())
        }
        "traction_cauchy" => covector(traction_cauchy(&moduli, &m, &u, &v, &normal(&m, chart, q, opts)?)?.values()),
        "traction_form" => covector(traction_form(&moduli, &m, &u, &v, &normal(&m, chart, q, opts)?)?.values()),
        "traction_adapted" => {
            let r = chart.unit_radial().ok_or(Error::ChartNotAdapted { chart, requested: 0 })?;
            covector(traction_adapted(&moduli, &m, &u, &v, r)?.values())
        }
        "lame_constants" => {
            let (a, b) = field
                .lame_constants()
                .ok_or_else(|| Error::InvalidSpec(format!("{} is not a Lamé field", field.spec().label())))?;
            Quantity::Pair([a, b])
        }
        other => return Err(Error::UnknownOp(other.to_string())),
    };
    Ok(EvalOutput {
        op: op.to_string(),
        chart,
        point: q,
        physical: physical(&m, &coordinate),
        coordinate,
    })
}

fn write_quantity(f: &mut fmt::Formatter<'_>, names: [&str; 3], q: &Quantity) -> fmt::Result {
    let num = |x: f64| format!("{x:>24.16e}");
    match q {
        Quantity::Scalar(s) => writeln!(f, "  {}", num(*s)),
        Quantity::Pair([a, b]) => writeln!(f, "  A = {}\n  B = {}", num(*a), num(*b)),
        Quantity::Vector(c) | Quantity::Covector(c) => {
            for (n, x) in names.iter().zip(c) {
                writeln!(f, "  {n:<6}{}", num(*x))?;
            }
            Ok(())
        }
        Quantity::Tensor(t) => {
            writeln!(f, "  {:<6}{:>24}{:>24}{:>24}", "", names[0], names[1], names[2])?;
            for (n, row) in names.iter().zip(t) {
                writeln!(f, "  {n:<6}{}{}{}", num(row[0]), num(row[1]), num(row[2]))?;
            }
            Ok(())
        }
        Quantity::Connection(g) => {
            for (k, block) in g.iter().enumerate() {
                writeln!(f, "  Γ^{}_ij", names[k])?;
                writeln!(f, "  {:<6}{:>24}{:>24}{:>24}", "", names[0], names[1], names[2])?;
                for (n, row) in names.iter().zip(block) {
                    writeln!(f, "  {n:<6}{}{}{}", num(row[0]), num(row[1]), num(row[2]))?;
                }
            }
            Ok(())
        }
    }
}

impl fmt::Display for EvalOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.chart.coordinate_names();
        writeln!(
            f,
            "{} in {} coordinates at ({}, {}, {})",
            self.op, self.chart, self.point[0], self.point[1], self.point[2]
        )?;
        writeln!(f, "coordinate components:")?;
        write_quantity(f, names, &self.coordinate)?;
        if let Some(p) = &self.physical {
            writeln!(f, "physical components:")?;
            write_quantity(f, names, p)?;
        }
        Ok(())
    }
}
