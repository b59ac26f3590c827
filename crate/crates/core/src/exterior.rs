//! Pointwise differential forms of degree 0 to 3 on a chart.
//!
//! Components are jets in the unnormalized coordinate co-basis. Two-forms
//! are stored in the order `(dx²∧dx³, dx³∧dx¹, dx¹∧dx²)`, so in Cartesian
//! coordinates `⋆` maps slot `i` of a one-form to slot `i` of a two-form.
//!
//! Every form and vector field records how many derivative orders its jets
//! still carry. `d` consumes one; reading an exhausted channel is an error.

use crate::charts::{ensure_site, MetricAtPoint, Site, METRIC_ORDER};
use crate::error::{Error, Result};
use crate::jets::Jet2;

/// A `k`-form at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct KForm {
    site: Site,
    degree: u8,
    comps: [Jet2; 3],
    order: u8,
}

fn slots(degree: u8) -> usize {
    match degree {
        0 | 3 => 1,
        _ => 3,
    }
}

impl KForm {
    pub fn new(site: Site, degree: u8, comps: &[Jet2], order: u8) -> Result<KForm> {
        if degree > 3 {
            return Err(Error::DegreeOverflow { left: degree, right: 0 });
        }
        if comps.len() != slots(degree) {
            return Err(Error::DegreeMismatch {
                op: "KForm::new",
                expected: if slots(degree) == 1 { "single-component" } else { "three-component" },
                found: degree,
            });
        }
        let mut stored = [Jet2::ZERO; 3];
        stored[..comps.len()].copy_from_slice(comps);
        Ok(KForm {
            site,
            degree,
            comps: stored,
            order: order.min(2),
        })
    }

    pub fn scalar(site: Site, f: Jet2, order: u8) -> KForm {
        KForm {
            site,
            degree: 0,
            comps: [f, Jet2::ZERO, Jet2::ZERO],
            order: order.min(2),
        }
    }

    pub fn one_form(site: Site, comps: [Jet2; 3], order: u8) -> KForm {
        KForm {
            site,
            degree: 1,
            comps,
            order: order.min(2),
        }
    }

    pub fn two_form(site: Site, comps: [Jet2; 3], order: u8) -> KForm {
        KForm {
            site,
            degree: 2,
            comps,
            order: order.min(2),
        }
    }

    pub fn three_form(site: Site, c: Jet2, order: u8) -> KForm {
        KForm {
            site,
            degree: 3,
            comps: [c, Jet2::ZERO, Jet2::ZERO],
            order: order.min(2),
        }
    }

    pub fn zero(site: Site, degree: u8) -> KForm {
        KForm {
            site,
            degree,
            comps: [Jet2::ZERO; 3],
            order: 2,
        }
    }

    /// The basis one-form `dx^axis`.
    pub fn basis_one_form(site: Site, axis: usize) -> KForm {
        let mut comps = [Jet2::ZERO; 3];
        comps[axis] = Jet2::constant(1.0);
        KForm::one_form(site, comps, 2)
    }

    pub fn site(&self) -> &Site {
        &self.site
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// Remaining derivative orders.
    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn components(&self) -> &[Jet2] {
        &self.comps[..slots(self.degree)]
    }

    pub fn component(&self, i: usize) -> Jet2 {
        self.components()[i]
    }

    pub fn values(&self) -> Vec<f64> {
        self.components().iter().map(|c| c.value).collect()
    }

    pub fn scale(&self, c: f64) -> KForm {
        KForm {
            comps: self.comps.map(|x| x.scale(c)),
            ..self.clone()
        }
    }

    /// Multiplies every component by a scalar jet known to `order` derivatives.
    pub fn scale_jet(&self, f: Jet2, order: u8) -> KForm {
        KForm {
            comps: self.comps.map(|x| x * f),
            order: self.order.min(order),
            ..self.clone()
        }
    }

    fn zip(&self, rhs: &KForm, op: &'static str, f: impl Fn(Jet2, Jet2) -> Jet2) -> Result<KForm> {
        ensure_site(&self.site, &rhs.site)?;
        if self.degree != rhs.degree {
            return Err(Error::DegreeMismatch {
                op,
                expected: degree_name(self.degree),
                found: rhs.degree,
            });
        }
        Ok(KForm {
            site: self.site,
            degree: self.degree,
            comps: std::array::from_fn(|i| f(self.comps[i], rhs.comps[i])),
            order: self.order.min(rhs.order),
        })
    }

    pub fn add(&self, rhs: &KForm) -> Result<KForm> {
        self.zip(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &KForm) -> Result<KForm> {
        self.zip(rhs, "sub", |a, b| a - b)
    }

    pub(crate) fn expect_degree(&self, op: &'static str, degree: u8) -> Result<()> {
        if self.degree == degree {
            Ok(())
        } else {
            Err(Error::DegreeMismatch {
                op,
                expected: degree_name(degree),
                found: self.degree,
            })
        }
    }

    pub(crate) fn expect_order(&self, op: &'static str, needed: u8) -> Result<()> {
        expect_order(op, self.order, needed)
    }
}

fn degree_name(d: u8) -> &'static str {
    match d {
        0 => "0",
        1 => "1",
        2 => "2",
        _ => "3",
    }
}

pub(crate) fn expect_order(op: &'static str, available: u8, needed: u8) -> Result<()> {
    if available >= needed {
        Ok(())
    } else {
        Err(Error::DerivativeBudgetExceeded { op, needed, available })
    }
}

/// A contravariant vector at one point, components in the coordinate basis.
#[derive(Clone, Debug, PartialEq)]
pub struct VecField {
    site: Site,
    comps: [Jet2; 3],
    order: u8,
}

impl VecField {
    pub fn new(site: Site, comps: [Jet2; 3], order: u8) -> VecField {
        VecField {
            site,
            comps,
            order: order.min(2),
        }
    }

    /// The coordinate basis vector `∂_axis`.
    pub fn basis(site: Site, axis: usize) -> VecField {
        let mut comps = [Jet2::ZERO; 3];
        comps[axis] = Jet2::constant(1.0);
        VecField::new(site, comps, 2)
    }

    pub fn site(&self) -> &Site {
        &self.site
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn components(&self) -> &[Jet2; 3] {
        &self.comps
    }

    pub fn values(&self) -> [f64; 3] {
        self.comps.map(|c| c.value)
    }

    pub fn scale(&self, c: f64) -> VecField {
        VecField {
            comps: self.comps.map(|x| x.scale(c)),
            ..self.clone()
        }
    }

    pub fn add(&self, rhs: &VecField) -> Result<VecField> {
        ensure_site(&self.site, &rhs.site)?;
        Ok(VecField {
            site: self.site,
            comps: std::array::from_fn(|i| self.comps[i] + rhs.comps[i]),
            order: self.order.min(rhs.order),
        })
    }

    pub fn sub(&self, rhs: &VecField) -> Result<VecField> {
        self.add(&rhs.scale(-1.0))
    }
}

/// Index lowering, `(v♭)_i = g_ij v^j`.
pub fn flat(m: &MetricAtPoint, v: &VecField) -> Result<KForm> {
    ensure_site(&m.site, v.site())?;
    let c = v.components();
    let comps = std::array::from_fn(|i| (0..3).map(|j| m.g_jet(i, j) * c[j]).sum());
    Ok(KForm::one_form(m.site, comps, v.order().min(METRIC_ORDER)))
}

/// Index raising, `(w♯)^i = g^ij w_j`.
pub fn sharp(m: &MetricAtPoint, w: &KForm) -> Result<VecField> {
    ensure_site(&m.site, w.site())?;
    w.expect_degree("sharp", 1)?;
    let c = w.components();
    let comps = std::array::from_fn(|i| (0..3).map(|j| m.g_inv_jet(i, j) * c[j]).sum());
    Ok(VecField::new(m.site, comps, w.order().min(METRIC_ORDER)))
}

/// Exterior derivative of a form of degree 0, 1 or 2.
pub fn exterior_derivative(w: &KForm) -> Result<KForm> {
    w.expect_order("exterior_derivative", 1)?;
    let c = w.components();
    let p = |slot: usize, axis: usize| c[slot].partial(axis);
    let order = w.order() - 1;
    let site = *w.site();
    match w.degree() {
        0 => Ok(KForm::one_form(site, [p(0, 0), p(0, 1), p(0, 2)], order)),
        1 => Ok(KForm::two_form(
            site,
            [p(2, 1) - p(1, 2), p(0, 2) - p(2, 0), p(1, 0) - p(0, 1)],
            order,
        )),
        2 => Ok(KForm::three_form(site, p(0, 0) + p(1, 1) + p(2, 2), order)),
        d => Err(Error::DegreeOverflow { left: d, right: 1 }),
    }
}

/// Hodge star for the chart metric and right-handed orientation.
pub fn hodge_star(m: &MetricAtPoint, w: &KForm) -> Result<KForm> {
    ensure_site(&m.site, w.site())?;
    let vol = m.sqrt_det_jet();
    let order = w.order().min(METRIC_ORDER);
    let c = w.components();
    let site = m.site;
    match w.degree() {
        0 => Ok(KForm::three_form(site, c[0] * vol, order)),
        1 => {
            // slot i of ⋆w is √g (w♯)^i
            let comps = std::array::from_fn(|i| vol * (0..3).map(|j| m.g_inv_jet(i, j) * c[j]).sum());
            Ok(KForm::two_form(site, comps, order))
        }
        2 => {
            let inv_vol = vol.recip()?;
            let comps = std::array::from_fn(|i| inv_vol * (0..3).map(|j| m.g_jet(i, j) * c[j]).sum());
            Ok(KForm::one_form(site, comps, order))
        }
        _ => Ok(KForm::scalar(site, c[0] * vol.recip()?, order)),
    }
}

/// Codifferential: `−⋆d⋆` on one- and three-forms, `+⋆d⋆` on two-forms.
pub fn codifferential(m: &MetricAtPoint, w: &KForm) -> Result<KForm> {
    if w.degree() == 0 {
        return Err(Error::DegreeMismatch {
            op: "codifferential",
            expected: "1, 2 or 3",
            found: 0,
        });
    }
    w.expect_order("codifferential", 1)?;
    let inner = hodge_star(m, &exterior_derivative(&hodge_star(m, w)?)?)?;
    Ok(match w.degree() {
        2 => inner,
        _ => inner.scale(-1.0),
    })
}

/// Wedge product.
pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    ensure_site(a.site(), b.site())?;
    let (da, db) = (a.degree(), b.degree());
    if da + db > 3 {
        return Err(Error::DegreeOverflow { left: da, right: db });
    }
    let order = a.order().min(b.order());
    let site = *a.site();
    let (x, y) = (a.components(), b.components());
    let out = match (da, db) {
        (0, _) => KForm::new(site, db, &y.iter().map(|c| x[0] * *c).collect::<Vec<_>>(), order)?,
        (_, 0) => KForm::new(site, da, &x.iter().map(|c| *c * y[0]).collect::<Vec<_>>(), order)?,
        (1, 1) => KForm::two_form(
            site,
            [
                x[1] * y[2] - x[2] * y[1],
                x[2] * y[0] - x[0] * y[2],
                x[0] * y[1] - x[1] * y[0],
            ],
            order,
        ),
        _ => KForm::three_form(site, (0..3).map(|i| x[i] * y[i]).sum(), order),
    };
    Ok(out)
}

/// Interior product `v ⌟ w`, contracting the first slot.
pub fn interior_product(v: &VecField, w: &KForm) -> Result<KForm> {
    ensure_site(v.site(), w.site())?;
    let order = v.order().min(w.order());
    let site = *v.site();
    let a = v.components();
    let c = w.components();
    match w.degree() {
        0 => Err(Error::DegreeMismatch {
            op: "interior_product",
            expected: "1, 2 or 3",
            found: 0,
        }),
        1 => Ok(KForm::scalar(site, (0..3).map(|i| a[i] * c[i]).sum(), order)),
        2 => Ok(KForm::one_form(
            site,
            [
                a[2] * c[1] - a[1] * c[2],
                a[0] * c[2] - a[2] * c[0],
                a[1] * c[0] - a[0] * c[1],
            ],
            order,
        )),
        _ => Ok(KForm::two_form(site, a.map(|ai| ai * c[0]), order)),
    }
}

/// `∇f = (df)♯`.
pub fn gradient(m: &MetricAtPoint, f: &KForm) -> Result<VecField> {
    f.expect_degree("gradient", 0)?;
    sharp(m, &exterior_derivative(f)?)
}

/// `∇·v = ⋆d⋆(v♭)`.
pub fn divergence(m: &MetricAtPoint, v: &VecField) -> Result<KForm> {
    hodge_star(m, &exterior_derivative(&hodge_star(m, &flat(m, v)?)?)?)
}

/// `∇×v = (⋆d(v♭))♯`.
pub fn curl(m: &MetricAtPoint, v: &VecField) -> Result<VecField> {
    sharp(m, &hodge_star(m, &exterior_derivative(&flat(m, v)?)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::Chart;

    fn site(chart: Chart, p: [f64; 3]) -> Site {
        Site { chart, point: p }
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-13 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn flat_sharp_cylindrical() {
        let m = Chart::Cylindrical.metric_at([2.0, 0.4, 0.0]).unwrap();
        let dtheta = flat(&m, &VecField::basis(m.site, 1)).unwrap();
        assert!(close(dtheta.component(0).value, 0.0));
        assert!(close(dtheta.component(1).value, 4.0));
        let raised = sharp(&m, &KForm::basis_one_form(m.site, 1)).unwrap();
        assert!(close(raised.values()[1], 0.25));
    }

    #[test]
    fn flat_is_identity_in_cartesian() {
        let m = Chart::Cartesian.metric_at([1.0, 2.0, 3.0]).unwrap();
        let s = Jet2::seeds([1.0, 2.0, 3.0]);
        let v = VecField::new(m.site, [s[0] * s[1], s[2], s[0].sin()], 2);
        let w = flat(&m, &v).unwrap();
        assert_eq!(w.components(), v.components());
        assert_eq!(sharp(&m, &w).unwrap(), v);
    }

    #[test]
    fn d_of_square() {
        let s = Jet2::seeds([3.0, 0.0, 0.0]);
        let f = KForm::scalar(site(Chart::Cartesian, [3.0, 0.0, 0.0]), s[0] * s[0], 2);
        let df = exterior_derivative(&f).unwrap();
        assert_eq!(df.values(), vec![6.0, 0.0, 0.0]);
        assert_eq!(df.order(), 1);
    }

    #[test]
    fn d_of_x_dy() {
        let p = [0.5, 0.2, -1.0];
        let s = Jet2::seeds(p);
        let w = KForm::one_form(site(Chart::Cartesian, p), [Jet2::ZERO, s[0], Jet2::ZERO], 2);
        assert_eq!(exterior_derivative(&w).unwrap().values(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn d_budget_is_enforced() {
        let p = [0.5, 0.2, -1.0];
        let s = Jet2::seeds(p);
        let f = KForm::scalar(site(Chart::Cartesian, p), s[0] * s[1] * s[2], 2);
        let ddf = exterior_derivative(&exterior_derivative(&f).unwrap()).unwrap();
        assert_eq!(ddf.order(), 0);
        assert!(ddf.values().iter().all(|v| *v == 0.0));
        assert!(matches!(
            exterior_derivative(&KForm::zero(ddf.site().clone(), 0).scale_jet(Jet2::ZERO, 0)),
            Err(Error::DerivativeBudgetExceeded { .. })
        ));
        let three = KForm::three_form(*f.site(), s[0], 2);
        assert!(matches!(exterior_derivative(&three), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn star_cartesian() {
        let m = Chart::Cartesian.metric_at([0.0; 3]).unwrap();
        let dx = KForm::basis_one_form(m.site, 0);
        assert_eq!(hodge_star(&m, &dx).unwrap().values(), vec![1.0, 0.0, 0.0]);
        let dxdy = KForm::two_form(m.site, [Jet2::ZERO, Jet2::ZERO, Jet2::constant(1.0)], 2);
        assert_eq!(hodge_star(&m, &dxdy).unwrap().values(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn star_cylindrical_r2() {
        let m = Chart::Cylindrical.metric_at([2.0, 1.0, 0.5]).unwrap();
        let one = KForm::scalar(m.site, Jet2::constant(1.0), 2);
        assert!(close(hodge_star(&m, &one).unwrap().values()[0], 2.0));
        let star_dr = hodge_star(&m, &KForm::basis_one_form(m.site, 0)).unwrap().values();
        assert!(close(star_dr[0], 2.0) && close(star_dr[1], 0.0) && close(star_dr[2], 0.0));
        // ⋆dθ = ½ dz∧dr, the second two-form slot
        let star_dtheta = hodge_star(&m, &KForm::basis_one_form(m.site, 1)).unwrap().values();
        assert!(close(star_dtheta[1], 0.5) && close(star_dtheta[0], 0.0));
    }

    #[test]
    fn codifferential_of_x_dx() {
        let p = [0.7, -0.3, 1.0];
        let m = Chart::Cartesian.metric_at(p).unwrap();
        let s = Jet2::seeds(p);
        let u = KForm::one_form(m.site, [s[0], Jet2::ZERO, Jet2::ZERO], 2);
        let du = codifferential(&m, &u).unwrap();
        assert_eq!(du.degree(), 0);
        assert_eq!(du.values(), vec![-1.0]);
        let constant = KForm::one_form(m.site, [Jet2::constant(2.0), Jet2::constant(-1.0), Jet2::ZERO], 2);
        assert_eq!(codifferential(&m, &constant).unwrap().values(), vec![0.0]);
    }

    #[test]
    fn wedge_rules() {
        let s = site(Chart::Cartesian, [0.0; 3]);
        let dx = KForm::basis_one_form(s, 0);
        let dy = KForm::basis_one_form(s, 1);
        assert!(wedge(&dx, &dx).unwrap().values().iter().all(|v| *v == 0.0));
        let xy = wedge(&dx, &dy).unwrap();
        let yx = wedge(&dy, &dx).unwrap();
        assert_eq!(xy.values(), vec![0.0, 0.0, 1.0]);
        assert_eq!(xy.add(&yx).unwrap().values(), vec![0.0, 0.0, 0.0]);
        let f = KForm::scalar(s, Jet2::constant(3.0), 2);
        assert_eq!(wedge(&f, &dy).unwrap(), dy.scale(3.0));
        assert!(matches!(wedge(&xy, &xy), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn interior_products() {
        let s = site(Chart::Cartesian, [0.0; 3]);
        let ex = VecField::basis(s, 0);
        assert_eq!(interior_product(&ex, &KForm::basis_one_form(s, 0)).unwrap().values(), vec![1.0]);
        let dxdy = wedge(&KForm::basis_one_form(s, 0), &KForm::basis_one_form(s, 1)).unwrap();
        assert_eq!(interior_product(&ex, &dxdy).unwrap().values(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn tag_mismatch() {
        let a = Chart::Cartesian.metric_at([0.0; 3]).unwrap();
        let v = VecField::basis(site(Chart::Cartesian, [1.0, 0.0, 0.0]), 0);
        assert!(matches!(flat(&a, &v), Err(Error::TagMismatch { .. })));
    }
}
