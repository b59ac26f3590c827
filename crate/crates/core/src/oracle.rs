//! Classical index-tensor operators used as ground truth for the
//! form-based routes.
//!
//! Nothing in this module calls the exterior-calculus or Lie-derivative
//! operators; it only reads components of the shared value types and the
//! chart geometry. A test in `tests/oracle_independence.rs` enforces this.

use crate::charts::{ensure_site, MetricAtPoint, METRIC_ORDER};
use crate::elasticity::ElasticModuli;
use crate::error::{Error, Result};
use crate::exterior::{KForm, VecField};
use crate::jets::Jet2;
use crate::lie::CovTensor2;

fn require(op: &'static str, available: u8, needed: u8) -> Result<()> {
    if available >= needed {
        Ok(())
    } else {
        Err(Error::DerivativeBudgetExceeded { op, needed, available })
    }
}

/// Levi-Civita symbol.
fn permutation_sign(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn lower(m: &MetricAtPoint, v: &VecField) -> [Jet2; 3] {
    let c = v.components();
    std::array::from_fn(|i| (0..3).map(|j| m.g_jet(i, j) * c[j]).sum())
}

fn covariant_derivative(m: &MetricAtPoint, u: &[Jet2; 3]) -> [[Jet2; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let connection: Jet2 = (0..3).map(|k| m.gamma_jet(k, i, j) * u[k]).sum();
            u[i].partial(j) - connection
        })
    })
}

/// `u_{i|j} = ∂_j u_i − Γ^k_ij u_k`, stored as `t[i][j]`.
pub fn cov_deriv_covector(m: &MetricAtPoint, u: &KForm) -> Result<CovTensor2> {
    ensure_site(&m.site, u.site())?;
    if u.degree() != 1 {
        return Err(Error::DegreeMismatch {
            op: "cov_deriv_covector",
            expected: "1",
            found: u.degree(),
        });
    }
    require("cov_deriv_covector", u.order(), 1)?;
    let c = [u.component(0), u.component(1), u.component(2)];
    Ok(CovTensor2::new(m.site, covariant_derivative(m, &c), u.order() - 1))
}

/// `(∇f)^i = g^ij ∂_j f`.
pub fn grad_classical(m: &MetricAtPoint, f: &KForm) -> Result<VecField> {
    ensure_site(&m.site, f.site())?;
    require("grad_classical", f.order(), 1)?;
    let scalar = f.component(0);
    let comps = std::array::from_fn(|i| (0..3).map(|j| m.g_inv_jet(i, j) * scalar.partial(j)).sum());
    Ok(VecField::new(m.site, comps, f.order() - 1))
}

/// `∇·v = (1/√g) ∂_i(√g v^i)`.
pub fn div_classical(m: &MetricAtPoint, v: &VecField) -> Result<KForm> {
    ensure_site(&m.site, v.site())?;
    require("div_classical", v.order(), 1)?;
    let vol = m.sqrt_det_jet();
    let flux: Jet2 = (0..3).map(|i| (vol * v.components()[i]).partial(i)).sum();
    let inv_vol = vol.recip().map_err(|_| Error::SingularPoint {
        chart: m.site.chart,
        point: m.site.point,
    })?;
    Ok(KForm::scalar(m.site, flux * inv_vol, (v.order() - 1).min(METRIC_ORDER - 1)))
}

/// `(∇×v)^i = ε^{ijk} v_{k|j} / √g` with `v_k = g_kl v^l`.
pub fn curl_classical(m: &MetricAtPoint, v: &VecField) -> Result<VecField> {
    ensure_site(&m.site, v.site())?;
    require("curl_classical", v.order(), 1)?;
    let nabla = covariant_derivative(m, &lower(m, v));
    let inv_vol = m.sqrt_det_jet().recip()?;
    let comps = std::array::from_fn(|i| {
        let mut acc = Jet2::ZERO;
        for j in 0..3 {
            for k in 0..3 {
                let s = permutation_sign(i, j, k);
                if s != 0.0 {
                    acc += nabla[k][j].scale(s);
                }
            }
        }
        acc * inv_vol
    });
    Ok(VecField::new(m.site, comps, v.order() - 1))
}

/// `Δv = ∇(∇·v) − ∇×∇×v`.
pub fn vector_laplacian(m: &MetricAtPoint, v: &VecField) -> Result<VecField> {
    require("vector_laplacian", v.order(), 2)?;
    let grad_div = grad_classical(m, &div_classical(m, v)?)?;
    let curl_curl = curl_classical(m, &curl_classical(m, v)?)?;
    grad_div.sub(&curl_curl)
}

/// Isotropic stress from the covariant-derivative strain,
/// `σ_ij = λ (∇·v) g_ij + μ (u_{i|j} + u_{j|i})`.
pub fn stress_classical(moduli: &ElasticModuli, m: &MetricAtPoint, v: &VecField) -> Result<CovTensor2> {
    require("stress_classical", v.order(), 1)?;
    let div = div_classical(m, v)?.component(0);
    let nabla = covariant_derivative(m, &lower(m, v));
    let comps = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (m.g_jet(i, j) * div).scale(moduli.lambda) + (nabla[i][j] + nabla[j][i]).scale(moduli.mu)
        })
    });
    Ok(CovTensor2::symmetric_from_upper(m.site, comps, v.order() - 1))
}

/// `(∇·σ)_i = g^jk (∂_k σ_ij − Γ^m_ik σ_mj − Γ^m_jk σ_im)`.
pub fn stress_divergence(m: &MetricAtPoint, sigma: &CovTensor2) -> Result<KForm> {
    ensure_site(&m.site, sigma.site())?;
    require("stress_divergence", sigma.order(), 1)?;
    let s = sigma.components();
    let comps = std::array::from_fn(|i| {
        let mut acc = Jet2::ZERO;
        for j in 0..3 {
            for k in 0..3 {
                let mut nabla = s[i][j].partial(k);
                for l in 0..3 {
                    nabla -= m.gamma_jet(l, i, k) * s[l][j] + m.gamma_jet(l, j, k) * s[i][l];
                }
                acc += m.g_inv_jet(j, k) * nabla;
            }
        }
        acc
    });
    Ok(KForm::one_form(m.site, comps, sigma.order() - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::Chart;

    #[test]
    fn gradient_of_paraboloid() {
        let p = [1.0, 2.0, 0.0];
        let m = Chart::Cartesian.metric_at(p).unwrap();
        let s = Jet2::seeds(p);
        let f = KForm::scalar(m.site, s[0] * s[0] + s[1] * s[1], 2);
        assert_eq!(grad_classical(&m, &f).unwrap().values(), [2.0, 4.0, 0.0]);
    }

    #[test]
    fn curl_of_rotation() {
        let p = [0.3, -0.2, 0.9];
        let m = Chart::Cartesian.metric_at(p).unwrap();
        let s = Jet2::seeds(p);
        let v = VecField::new(m.site, [-s[1], s[0], Jet2::ZERO], 2);
        assert_eq!(curl_classical(&m, &v).unwrap().values(), [0.0, 0.0, 2.0]);
    }

    #[test]
    fn divergence_of_position_in_every_chart() {
        // (x, y, z) is r ∂_r in spherical, (r, 0, z) in cylindrical
        let cases: [(Chart, [f64; 3]); 3] = [
            (Chart::Cartesian, [0.3, 0.4, -1.0]),
            (Chart::Cylindrical, [1.3, 0.4, -1.0]),
            (Chart::Spherical, [1.3, 0.4, -1.0]),
        ];
        for (chart, p) in cases {
            let m = chart.metric_at(p).unwrap();
            let s = Jet2::seeds(p);
            let comps = match chart {
                Chart::Cartesian => s,
                Chart::Cylindrical => [s[0], Jet2::ZERO, s[2]],
                _ => [s[0], Jet2::ZERO, Jet2::ZERO],
            };
            let div = div_classical(&m, &VecField::new(m.site, comps, 2)).unwrap();
            assert!((div.values()[0] - 3.0).abs() < 1e-14, "{chart}");
        }
    }

    #[test]
    fn covariant_derivative_of_dr_in_cylindrical() {
        let m = Chart::Cylindrical.metric_at([1.5, 0.3, 0.0]).unwrap();
        let dr = KForm::basis_one_form(m.site, 0);
        let t = cov_deriv_covector(&m, &dr).unwrap();
        assert!((t.values()[1][1] - 1.5).abs() < 1e-14);
    }

    #[test]
    fn laplacian_of_quadratic() {
        let p = [0.8, -0.1, 0.5];
        let m = Chart::Cartesian.metric_at(p).unwrap();
        let s = Jet2::seeds(p);
        let v = VecField::new(m.site, [s[0] * s[0], Jet2::ZERO, Jet2::ZERO], 2);
        assert_eq!(vector_laplacian(&m, &v).unwrap().values(), [2.0, 0.0, 0.0]);
        let linear = VecField::new(m.site, [s[1], s[2].scale(3.0), s[0] - s[1]], 2);
        assert_eq!(vector_laplacian(&m, &linear).unwrap().values(), [0.0; 3]);
    }

    #[test]
    fn laplacian_of_harmonic_gradient() {
        // ∇(x³ − 3xy²) = (3x² − 3y², −6xy, 0)
        let p = [0.7, 1.1, -0.4];
        let m = Chart::Cartesian.metric_at(p).unwrap();
        let s = Jet2::seeds(p);
        let v = VecField::new(
            m.site,
            [(s[0] * s[0] - s[1] * s[1]).scale(3.0), (s[0] * s[1]).scale(-6.0), Jet2::ZERO],
            2,
        );
        assert!(vector_laplacian(&m, &v).unwrap().values().iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn constant_stress_is_equilibrated() {
        let m = Chart::Cartesian.metric_at([0.0; 3]).unwrap();
        let c = |x: f64| Jet2::constant(x);
        let sigma = CovTensor2::symmetric_from_upper(
            m.site,
            [[c(1.0), c(2.0), c(3.0)], [c(2.0), c(4.0), c(5.0)], [c(3.0), c(5.0), c(6.0)]],
            2,
        );
        assert_eq!(stress_divergence(&m, &sigma).unwrap().values(), vec![0.0; 3]);
    }

    #[test]
    fn budget_checked() {
        let m = Chart::Cartesian.metric_at([0.0; 3]).unwrap();
        let v = VecField::new(m.site, [Jet2::ZERO; 3], 1);
        assert!(matches!(
            vector_laplacian(&m, &v),
            Err(Error::DerivativeBudgetExceeded { .. })
        ));
    }
}
