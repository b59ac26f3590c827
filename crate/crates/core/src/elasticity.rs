//! Strain, stress, the Cauchy–Navier residual and surface traction for a
//! homogeneous isotropic body, each computed by more than one route.
//!
//! Routes that need both the displacement one-form `u` and the displacement
//! vector field `v` take both and check `v = u♯` instead of converting
//! silently.

use serde::{Deserialize, Serialize};

use crate::charts::{ensure_site, MetricAtPoint, Site};
use crate::error::{Error, Result};
use crate::exterior::{
    codifferential, curl, divergence, exterior_derivative, flat, gradient, interior_product, sharp, KForm, VecField,
};
use crate::jets::Jet2;
use crate::lie::{lie_bracket, lie_cov2, CovTensor2};
use crate::oracle;

/// Tolerance of the `v = u♯` consistency check.
pub const PAIR_TOLERANCE: f64 = 1e-12;
/// Tolerance of the unit-normal check on boundary points.
pub const NORMAL_TOLERANCE: f64 = 1e-10;

/// Lamé parameters in pascals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElasticModuli {
    pub lambda: f64,
    pub mu: f64,
}

impl ElasticModuli {
    /// Requires `μ > 0` and a positive bulk modulus `λ + 2μ/3 > 0`.
    pub fn new(lambda: f64, mu: f64) -> Result<ElasticModuli> {
        let valid = lambda.is_finite() && mu.is_finite() && mu > 0.0 && lambda + 2.0 * mu / 3.0 > 0.0;
        if valid {
            Ok(ElasticModuli { lambda, mu })
        } else {
            Err(Error::InvalidModuli { lambda, mu })
        }
    }
}

/// A surface point with its unit normal extended to a neighborhood.
#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    normal: VecField,
    normal_form: KForm,
}

impl BoundaryPoint {
    /// `normal` must be unit length at the point and carry at least one
    /// derivative order, since the traction formula differentiates it.
    pub fn new(m: &MetricAtPoint, normal: VecField) -> Result<BoundaryPoint> {
        let normal_form = flat(m, &normal)?;
        let norm_sq: f64 = (0..3)
            .map(|i| normal.values()[i] * normal_form.component(i).value)
            .sum();
        if (norm_sq - 1.0).abs() > NORMAL_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(BoundaryPoint { normal, normal_form })
    }

    /// Normal `∂_r` (and `n = dr`) of a surface `r = const` in a chart with a
    /// unit radial coordinate at `r_index`.
    pub fn adapted(m: &MetricAtPoint, r_index: usize) -> Result<BoundaryPoint> {
        check_adapted(m, r_index)?;
        BoundaryPoint::new(m, VecField::basis(m.site, r_index))
    }

    pub fn site(&self) -> &Site {
        self.normal.site()
    }

    pub fn normal(&self) -> &VecField {
        &self.normal
    }

    pub fn normal_form(&self) -> &KForm {
        &self.normal_form
    }
}

fn check_adapted(m: &MetricAtPoint, r_index: usize) -> Result<()> {
    let chart = m.site.chart;
    if chart.unit_radial() == Some(r_index) {
        Ok(())
    } else {
        Err(Error::ChartNotAdapted { chart, requested: r_index })
    }
}

/// Checks `v = u♯` on every derivative channel both operands still carry,
/// relative to the largest entry of each component jet.
fn check_pair(m: &MetricAtPoint, u: &KForm, v: &VecField) -> Result<()> {
    ensure_site(u.site(), v.site())?;
    let raised = sharp(m, u)?;
    let order = u.order().min(v.order());
    let mut deviation = 0.0_f64;
    for (a, b) in raised.components().iter().zip(v.components()) {
        let mut pairs = vec![(a.value, b.value)];
        if order >= 1 {
            pairs.extend(a.grad.iter().copied().zip(b.grad));
        }
        if order >= 2 {
            pairs.extend(a.hess.iter().copied().zip(b.hess));
        }
        let scale = pairs.iter().fold(1.0_f64, |s, (x, y)| s.max(x.abs()).max(y.abs()));
        let worst = pairs.iter().fold(0.0_f64, |d, (x, y)| d.max((x - y).abs()));
        deviation = deviation.max(worst / scale);
    }
    if deviation <= PAIR_TOLERANCE {
        Ok(())
    } else {
        Err(Error::InconsistentPair { deviation })
    }
}

/// Volume expansion `e = ∇·v = −δu`.
pub fn volume_expansion(m: &MetricAtPoint, u: &KForm) -> Result<KForm> {
    Ok(codifferential(m, u)?.scale(-1.0))
}

/// Strain as half the Lie derivative of the metric along the displacement
/// vector field, `ε = ½ L_v g`.
pub fn strain_lie(m: &MetricAtPoint, v: &VecField) -> Result<CovTensor2> {
    Ok(lie_cov2(v, &CovTensor2::metric(m), m)?.scale(0.5))
}

/// Strain from covariant derivatives of the displacement one-form,
/// `ε̃_ij = ½(∂_j u_i + ∂_i u_j) − Γ^k_ij u_k`.
pub fn strain_covariant(m: &MetricAtPoint, u: &KForm) -> Result<CovTensor2> {
    ensure_site(&m.site, u.site())?;
    u.expect_degree("strain_covariant", 1)?;
    u.expect_order("strain_covariant", 1)?;
    let c = u.components();
    let comps = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let connection: Jet2 = (0..3).map(|k| m.gamma_jet(k, i, j) * c[k]).sum();
            (c[i].partial(j) + c[j].partial(i)).scale(0.5) - connection
        })
    });
    Ok(CovTensor2::symmetric_from_upper(m.site, comps, (u.order() - 1).min(1)))
}

/// Isotropic stress `σ = −λ δu g + μ L_v g`.
pub fn stress(moduli: &ElasticModuli, m: &MetricAtPoint, u: &KForm, v: &VecField) -> Result<CovTensor2> {
    check_pair(m, u, v)?;
    let expansion = volume_expansion(m, u)?;
    let metric = CovTensor2::metric(m);
    let dilatational = metric
        .scale_jet(expansion.component(0), expansion.order())
        .scale(moduli.lambda);
    let deviatoric = lie_cov2(v, &metric, m)?.scale(moduli.mu);
    let sigma = dilatational.add(&deviatoric)?;
    let order = sigma.order();
    Ok(CovTensor2::symmetric_from_upper(m.site, *sigma.components(), order))
}

/// The Cauchy–Navier operator in codifferential form,
/// `(λ+2μ) dδu + μ δdu`.
pub fn navier_operator(moduli: &ElasticModuli, m: &MetricAtPoint, u: &KForm) -> Result<KForm> {
    u.expect_degree("navier_operator", 1)?;
    u.expect_order("navier_operator", 2)?;
    let grad_div = exterior_derivative(&codifferential(m, u)?)?;
    let curl_curl = codifferential(m, &exterior_derivative(u)?)?;
    grad_div
        .scale(moduli.lambda + 2.0 * moduli.mu)
        .add(&curl_curl.scale(moduli.mu))
}

/// Cauchy–Navier residual from the codifferential form, oriented like the
/// classical residual `μΔv + (λ+μ)∇(∇·v)`. Since `dδu = −♭∇(∇·v)` and
/// `δdu = ♭∇×∇×v`, this is `−[(λ+2μ) dδu + μ δdu]`.
pub fn cn_residual_form(moduli: &ElasticModuli, m: &MetricAtPoint, u: &KForm) -> Result<KForm> {
    Ok(navier_operator(moduli, m, u)?.scale(-1.0))
}

/// Cauchy–Navier residual `♭[(λ+2μ) ∇(∇·v) − μ ∇×∇×v]` with grad, div and
/// curl taken from their exterior-calculus expressions.
pub fn cn_residual_gradcurl(moduli: &ElasticModuli, m: &MetricAtPoint, u: &KForm) -> Result<KForm> {
    u.expect_degree("cn_residual_gradcurl", 1)?;
    u.expect_order("cn_residual_gradcurl", 2)?;
    let v = sharp(m, u)?;
    let grad_div = gradient(m, &divergence(m, &v)?)?;
    let curl_curl = curl(m, &curl(m, &v)?)?;
    let combined = grad_div
        .scale(moduli.lambda + 2.0 * moduli.mu)
        .sub(&curl_curl.scale(moduli.mu))?;
    flat(m, &combined)
}

/// Classical Cauchy–Navier residual `μΔv + (λ+μ)∇(∇·v)` from the oracle.
pub fn cn_residual_classical(moduli: &ElasticModuli, m: &MetricAtPoint, v: &VecField) -> Result<VecField> {
    let laplacian = oracle::vector_laplacian(m, v)?;
    let grad_div = oracle::grad_classical(m, &oracle::div_classical(m, v)?)?;
    laplacian
        .scale(moduli.mu)
        .add(&grad_div.scale(moduli.lambda + moduli.mu))
}

/// Traction from Cauchy's stress theorem, `t_i = σ_ij n^j`.
pub fn traction_cauchy(
    moduli: &ElasticModuli,
    m: &MetricAtPoint,
    u: &KForm,
    v: &VecField,
    bp: &BoundaryPoint,
) -> Result<KForm> {
    ensure_site(&m.site, bp.site())?;
    stress(moduli, m, u, v)?.contract(bp.normal())
}

/// Traction in form language,
/// `t = −λ δu n + μ (d(v⌟n) + v⌟dn + [n̄, v]♭)`.
pub fn traction_form(
    moduli: &ElasticModuli,
    m: &MetricAtPoint,
    u: &KForm,
    v: &VecField,
    bp: &BoundaryPoint,
) -> Result<KForm> {
    check_pair(m, u, v)?;
    ensure_site(&m.site, bp.site())?;
    let n = bp.normal_form();
    n.expect_order("traction_form", 1)?;
    let delta_u = codifferential(m, u)?;
    let pressure = n
        .scale_jet(delta_u.component(0), delta_u.order())
        .scale(-moduli.lambda);
    let normal_change = exterior_derivative(&interior_product(v, n)?)?;
    let transport = interior_product(v, &exterior_derivative(n)?)?;
    let bracket = flat(m, &lie_bracket(bp.normal(), v)?)?;
    let shear = normal_change.add(&transport)?.add(&bracket)?.scale(moduli.mu);
    pressure.add(&shear)
}

/// Traction on a surface `r = const` of a chart whose coordinate `r` has
/// unit length and is orthogonal to the others, normal `∂_r`:
/// `t = −(λ δu) dr + μ (du^r + [∂_r, v]♭)`.
pub fn traction_adapted(
    moduli: &ElasticModuli,
    m: &MetricAtPoint,
    u: &KForm,
    v: &VecField,
    r_index: usize,
) -> Result<KForm> {
    check_adapted(m, r_index)?;
    check_pair(m, u, v)?;
    let site = m.site;
    let dr = KForm::basis_one_form(site, r_index);
    let delta_u = codifferential(m, u)?;
    let pressure = dr.scale_jet(delta_u.component(0), delta_u.order()).scale(-moduli.lambda);
    let radial_component = KForm::scalar(site, v.components()[r_index], v.order());
    let bracket = flat(m, &lie_bracket(&VecField::basis(site, r_index), v)?)?;
    let shear = exterior_derivative(&radial_component)?.add(&bracket)?.scale(moduli.mu);
    pressure.add(&shear)
}
