//! Lie brackets and Lie derivatives of scalars, one-forms and covariant
//! rank-2 tensors.

use crate::charts::{ensure_site, MetricAtPoint, Site, METRIC_ORDER};
use crate::error::Result;
use crate::exterior::{exterior_derivative, expect_order, interior_product, KForm, VecField};
use crate::jets::Jet2;

/// Covariant rank-2 tensor `t_ij dx^i ⊗ dx^j` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct CovTensor2 {
    site: Site,
    comps: [[Jet2; 3]; 3],
    symmetric: bool,
    order: u8,
}

impl CovTensor2 {
    pub fn new(site: Site, comps: [[Jet2; 3]; 3], order: u8) -> CovTensor2 {
        CovTensor2 {
            site,
            comps,
            symmetric: false,
            order: order.min(2),
        }
    }

    /// Builds a symmetric tensor from the upper triangle of `comps`; the lower
    /// triangle is mirrored so that `t_ij == t_ji` holds exactly.
    pub fn symmetric_from_upper(site: Site, comps: [[Jet2; 3]; 3], order: u8) -> CovTensor2 {
        let comps = std::array::from_fn(|i| std::array::from_fn(|j| if i <= j { comps[i][j] } else { comps[j][i] }));
        CovTensor2 {
            site,
            comps,
            symmetric: true,
            order: order.min(2),
        }
    }

    /// The metric tensor `g_ij dx^i ⊗ dx^j`.
    pub fn metric(m: &MetricAtPoint) -> CovTensor2 {
        let comps = std::array::from_fn(|i| std::array::from_fn(|j| m.g_jet(i, j)));
        CovTensor2::symmetric_from_upper(m.site, comps, METRIC_ORDER)
    }

    pub fn site(&self) -> &Site {
        &self.site
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn component(&self, i: usize, j: usize) -> Jet2 {
        self.comps[i][j]
    }

    pub fn components(&self) -> &[[Jet2; 3]; 3] {
        &self.comps
    }

    pub fn values(&self) -> [[f64; 3]; 3] {
        self.comps.map(|r| r.map(|c| c.value))
    }

    pub fn scale(&self, c: f64) -> CovTensor2 {
        CovTensor2 {
            comps: self.comps.map(|r| r.map(|x| x.scale(c))),
            ..self.clone()
        }
    }

    pub fn scale_jet(&self, f: Jet2, order: u8) -> CovTensor2 {
        CovTensor2 {
            comps: self.comps.map(|r| r.map(|x| x * f)),
            order: self.order.min(order),
            ..self.clone()
        }
    }

    pub fn add(&self, rhs: &CovTensor2) -> Result<CovTensor2> {
        ensure_site(&self.site, &rhs.site)?;
        Ok(CovTensor2 {
            site: self.site,
            comps: std::array::from_fn(|i| std::array::from_fn(|j| self.comps[i][j] + rhs.comps[i][j])),
            symmetric: self.symmetric && rhs.symmetric,
            order: self.order.min(rhs.order),
        })
    }

    /// `t_ij v^j` as a one-form.
    pub fn contract(&self, v: &VecField) -> Result<KForm> {
        ensure_site(&self.site, v.site())?;
        let c = v.components();
        let comps = std::array::from_fn(|i| (0..3).map(|j| self.comps[i][j] * c[j]).sum());
        Ok(KForm::one_form(self.site, comps, self.order.min(v.order())))
    }

    /// `t : t = g^ik g^jl t_ij t_kl`, value channel only.
    pub fn norm_sq(&self, m: &MetricAtPoint) -> Result<f64> {
        ensure_site(&self.site, &m.site)?;
        let t = self.values();
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        acc += m.g_inv[i][k] * m.g_inv[j][l] * t[i][j] * t[k][l];
                    }
                }
            }
        }
        Ok(acc)
    }
}

/// `[v, w]^i = v^k ∂_k w^i − w^k ∂_k v^i`.
pub fn lie_bracket(v: &VecField, w: &VecField) -> Result<VecField> {
    ensure_site(v.site(), w.site())?;
    expect_order("lie_bracket", v.order().min(w.order()), 1)?;
    let (a, b) = (v.components(), w.components());
    let comps = std::array::from_fn(|i| (0..3).map(|k| a[k] * b[i].partial(k) - b[k] * a[i].partial(k)).sum());
    Ok(VecField::new(*v.site(), comps, v.order().min(w.order()) - 1))
}

/// `L_v f = v^k ∂_k f`.
pub fn lie_scalar(v: &VecField, f: &KForm) -> Result<KForm> {
    ensure_site(v.site(), f.site())?;
    f.expect_degree("lie_scalar", 0)?;
    f.expect_order("lie_scalar", 1)?;
    let a = v.components();
    let value = (0..3).map(|k| a[k] * f.component(0).partial(k)).sum();
    Ok(KForm::scalar(*v.site(), value, v.order().min(f.order() - 1)))
}

/// Lie derivative of a one-form by Cartan's formula, `L_v w = v⌟dw + d(v⌟w)`.
pub fn lie_oneform(v: &VecField, w: &KForm) -> Result<KForm> {
    ensure_site(v.site(), w.site())?;
    w.expect_degree("lie_oneform", 1)?;
    expect_order("lie_oneform", v.order().min(w.order()), 1)?;
    let transport = interior_product(v, &exterior_derivative(w)?)?;
    let potential = exterior_derivative(&interior_product(v, w)?)?;
    transport.add(&potential)
}

/// Lie derivative of a one-form from the coordinate formula
/// `(L_v w)_i = v^k ∂_k w_i + w_k ∂_i v^k`.
pub fn lie_oneform_coordinate(v: &VecField, w: &KForm) -> Result<KForm> {
    ensure_site(v.site(), w.site())?;
    w.expect_degree("lie_oneform_coordinate", 1)?;
    expect_order("lie_oneform_coordinate", v.order().min(w.order()), 1)?;
    let (a, c) = (v.components(), w.components());
    let comps = std::array::from_fn(|i| (0..3).map(|k| a[k] * c[i].partial(k) + c[k] * a[k].partial(i)).sum());
    Ok(KForm::one_form(*v.site(), comps, v.order().min(w.order()) - 1))
}

/// Lie derivative of a covariant rank-2 tensor,
/// `(L_v t)_ij = v^k ∂_k t_ij + t_kj ∂_i v^k + t_ik ∂_j v^k`.
pub fn lie_cov2(v: &VecField, t: &CovTensor2, m: &MetricAtPoint) -> Result<CovTensor2> {
    ensure_site(v.site(), t.site())?;
    ensure_site(v.site(), &m.site)?;
    let order = v.order().min(t.order());
    expect_order("lie_cov2", order, 1)?;
    let a = v.components();
    let entry = |i: usize, j: usize| -> Jet2 {
        (0..3)
            .map(|k| a[k] * t.comps[i][j].partial(k) + t.comps[k][j] * a[k].partial(i) + t.comps[i][k] * a[k].partial(j))
            .sum()
    };
    let comps = std::array::from_fn(|i| std::array::from_fn(|j| entry(i, j)));
    Ok(if t.is_symmetric() {
        CovTensor2::symmetric_from_upper(*v.site(), comps, order - 1)
    } else {
        CovTensor2::new(*v.site(), comps, order - 1)
    })
}

/// Lie derivative of `t_ij dx^i ⊗ dx^j` expanded with the tensor-product
/// rule: `(L_v t_ij) dx^i⊗dx^j + t_ij (L_v dx^i)⊗dx^j + t_ij dx^i⊗(L_v dx^j)`,
/// where the basis terms use Cartan's formula. Kept as the self-test route
/// for [`lie_cov2`].
pub fn lie_cov2_product_rule(v: &VecField, t: &CovTensor2, m: &MetricAtPoint) -> Result<CovTensor2> {
    ensure_site(v.site(), t.site())?;
    ensure_site(v.site(), &m.site)?;
    let site = *v.site();
    let order = v.order().min(t.order());
    expect_order("lie_cov2_product_rule", order, 1)?;
    let basis: Vec<KForm> = (0..3)
        .map(|i| lie_oneform(v, &KForm::basis_one_form(site, i)))
        .collect::<Result<_>>()?;
    let mut comps = [[Jet2::ZERO; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let coefficient = lie_scalar(v, &KForm::scalar(site, t.comps[a][b], t.order()))?;
            let mut acc = coefficient.component(0);
            for i in 0..3 {
                acc += t.comps[i][b] * basis[i].component(a);
                acc += t.comps[a][i] * basis[i].component(b);
            }
            comps[a][b] = acc;
        }
    }
    Ok(CovTensor2::new(site, comps, order - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::Chart;

    fn cart(p: [f64; 3]) -> (MetricAtPoint, [Jet2; 3]) {
        (Chart::Cartesian.metric_at(p).unwrap(), Jet2::seeds(p))
    }

    #[test]
    fn coordinate_fields_commute() {
        let (m, _) = cart([0.1, 0.2, 0.3]);
        let b = lie_bracket(&VecField::basis(m.site, 0), &VecField::basis(m.site, 1)).unwrap();
        assert_eq!(b.values(), [0.0; 3]);
    }

    #[test]
    fn bracket_of_shear_and_translation() {
        let (m, s) = cart([0.4, -1.0, 2.0]);
        let v = VecField::new(m.site, [Jet2::ZERO, s[0], Jet2::ZERO], 2);
        let b = lie_bracket(&v, &VecField::basis(m.site, 0)).unwrap();
        assert_eq!(b.values(), [0.0, -1.0, 0.0]);
    }

    /// Flow of a field in Cartesian coordinates, integrated with RK4.
    fn flow(f: &dyn Fn([f64; 3]) -> [f64; 3], p: [f64; 3], t: f64) -> [f64; 3] {
        let n = 64;
        let h = t / n as f64;
        let mut x = p;
        let add = |a: [f64; 3], b: [f64; 3], c: f64| std::array::from_fn(|i| a[i] + c * b[i]);
        for _ in 0..n {
            let k1 = f(x);
            let k2 = f(add(x, k1, h / 2.0));
            let k3 = f(add(x, k2, h / 2.0));
            let k4 = f(add(x, k3, h));
            x = std::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        }
        x
    }

    #[test]
    fn bracket_matches_flow_commutator() {
        // v = (y², xz, 1), w = (z, x², y)
        let vf = |x: [f64; 3]| [x[1] * x[1], x[0] * x[2], 1.0];
        let wf = |x: [f64; 3]| [x[2], x[0] * x[0], x[1]];
        let p = [0.3, -0.5, 0.8];
        let commutator = |t: f64| {
            let a = flow(&vf, p, t);
            let b = flow(&wf, a, t);
            let c = flow(&vf, b, -t);
            let d = flow(&wf, c, -t);
            std::array::from_fn::<f64, 3, _>(|i| (d[i] - p[i]) / (t * t))
        };
        let t = 1e-2;
        let (c1, c2) = (commutator(t), commutator(t / 2.0));
        let estimate: [f64; 3] = std::array::from_fn(|i| 2.0 * c2[i] - c1[i]);

        let (m, s) = cart(p);
        let v = VecField::new(m.site, [s[1] * s[1], s[0] * s[2], Jet2::constant(1.0)], 2);
        let w = VecField::new(m.site, [s[2], s[0] * s[0], s[1]], 2);
        let b = lie_bracket(&v, &w).unwrap().values();
        for i in 0..3 {
            assert!((b[i] - estimate[i]).abs() < 1e-3, "{b:?} vs {estimate:?}");
        }
    }

    #[test]
    fn bracket_antisymmetric() {
        let (m, s) = cart([0.3, 0.7, -0.2]);
        let v = VecField::new(m.site, [s[1] * s[2], s[0].sin(), s[2] * s[2]], 2);
        assert!(lie_bracket(&v, &v).unwrap().values().iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn scalar_lie_derivatives() {
        let (m, s) = cart([1.5, 0.0, 0.0]);
        let x = KForm::scalar(m.site, s[0], 2);
        assert_eq!(lie_scalar(&VecField::basis(m.site, 0), &x).unwrap().values(), vec![1.0]);
        let konst = KForm::scalar(m.site, Jet2::constant(3.0), 2);
        let v = VecField::new(m.site, [s[0], s[1], s[2]], 2);
        assert_eq!(lie_scalar(&v, &konst).unwrap().values(), vec![0.0]);
        let radial_x = VecField::new(m.site, [s[0], Jet2::ZERO, Jet2::ZERO], 2);
        let x2 = KForm::scalar(m.site, s[0] * s[0], 2);
        assert_eq!(lie_scalar(&radial_x, &x2).unwrap().values(), vec![2.0 * 1.5 * 1.5]);
    }

    #[test]
    fn lie_of_dx() {
        let (m, s) = cart([1.25, 0.5, 0.0]);
        let dx = KForm::basis_one_form(m.site, 0);
        assert_eq!(lie_oneform(&VecField::basis(m.site, 0), &dx).unwrap().values(), vec![0.0; 3]);
        let v = VecField::new(m.site, [s[0] * s[0], Jet2::ZERO, Jet2::ZERO], 2);
        assert_eq!(lie_oneform(&v, &dx).unwrap().values(), vec![2.5, 0.0, 0.0]);
    }

    #[test]
    fn killing_fields_in_cartesian() {
        let (m, s) = cart([0.3, -0.9, 1.7]);
        let g = CovTensor2::metric(&m);
        let rot = VecField::new(m.site, [-s[1], s[0], Jet2::ZERO], 2);
        assert!(lie_cov2(&rot, &g, &m).unwrap().values().iter().flatten().all(|x| *x == 0.0));
        let dil = VecField::new(m.site, s, 2);
        let l = lie_cov2(&dil, &g, &m).unwrap();
        assert!(l.is_symmetric());
        assert_eq!(l.values(), [[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 2.0]]);
    }

    #[test]
    fn rotation_is_isometry_in_cylindrical() {
        let m = Chart::Cylindrical.metric_at([1.7, 0.2, 0.4]).unwrap();
        let g = CovTensor2::metric(&m);
        let l = lie_cov2(&VecField::basis(m.site, 1), &g, &m).unwrap();
        assert!(l.values().iter().flatten().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn closed_form_matches_product_rule_expansion() {
        let m = Chart::Warped.metric_at([0.4, -0.6, 1.1]).unwrap();
        let s = Jet2::seeds([0.4, -0.6, 1.1]);
        let v = VecField::new(m.site, [s[0] * s[1], s[2] * s[2] - s[0], s[1] * s[1] * s[1]], 2);
        let g = CovTensor2::metric(&m);
        let a = lie_cov2(&v, &g, &m).unwrap().values();
        let b = lie_cov2_product_rule(&v, &g, &m).unwrap().values();
        for i in 0..3 {
            for j in 0..3 {
                assert!((a[i][j] - b[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn budget_errors() {
        let (m, s) = cart([0.0; 3]);
        let v = VecField::new(m.site, s, 0);
        assert!(lie_bracket(&v, &v).is_err());
        let g = CovTensor2::metric(&m);
        assert!(lie_cov2(&v, &g, &m).is_err());
    }
}
