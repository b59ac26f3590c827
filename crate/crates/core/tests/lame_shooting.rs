//! Independent check of the Lamé constants: integrate the radial
//! equilibrium equation with RK4 and shoot for the boundary tractions.

use elastoforms::harness::{make_field, FieldKind, FieldSpec, LameParams};
use elastoforms::Chart;

/// Radial equilibrium `u'' + k u'/r − k u/r² = 0` and radial stress
/// `(λ+2μ) u' + kλ u/r`, with `k = 2` for the sphere and `k = 1` for the
/// plane-strain cylinder.
struct Radial {
    k: f64,
    lambda: f64,
    mu: f64,
}

impl Radial {
    fn rhs(&self, r: f64, [u, du]: [f64; 2]) -> [f64; 2] {
        [du, -self.k * du / r + self.k * u / (r * r)]
    }

    fn integrate(&self, from: f64, to: f64, mut y: [f64; 2], steps: usize) -> [f64; 2] {
        let h = (to - from) / steps as f64;
        let mut r = from;
        let axpy = |y: [f64; 2], s: f64, k: [f64; 2]| [y[0] + s * k[0], y[1] + s * k[1]];
        for _ in 0..steps {
            let k1 = self.rhs(r, y);
            let k2 = self.rhs(r + h / 2.0, axpy(y, h / 2.0, k1));
            let k3 = self.rhs(r + h / 2.0, axpy(y, h / 2.0, k2));
            let k4 = self.rhs(r + h, axpy(y, h, k3));
            y = [
                y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
                y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            ];
            r += h;
        }
        y
    }

    fn stress(&self, r: f64, [u, du]: [f64; 2]) -> f64 {
        (self.lambda + 2.0 * self.mu) * du + self.k * self.lambda * u / r
    }

    /// Initial state at `a` meeting `σ_rr(a) = −p` and `σ_rr(b) = 0`.
    fn shoot(&self, a: f64, b: f64, p: f64) -> [f64; 2] {
        const STEPS: usize = 4000;
        let basis = [[1.0, 0.0], [0.0, 1.0]];
        let ends = basis.map(|y0| self.integrate(a, b, y0, STEPS));
        // Rows: traction at a, traction at b; columns: basis solutions.
        let m = [
            [self.stress(a, basis[0]), self.stress(a, basis[1])],
            [self.stress(b, ends[0]), self.stress(b, ends[1])],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let rhs = [-p, 0.0];
        let c0 = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
        let c1 = (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det;
        [c0, c1]
    }
}

fn check(kind: fn(LameParams) -> FieldKind, k: f64, params: LameParams) {
    let field = make_field(&FieldSpec::new(kind(params), Chart::Cartesian)).unwrap();
    let (a_const, b_const) = field.lame_constants().unwrap();
    let ode = Radial {
        k,
        lambda: params.lambda,
        mu: params.mu,
    };
    let y0 = ode.shoot(params.a, params.b, params.p_i);
    let closed = |r: f64| a_const * r + b_const / r.powf(k);
    for i in 0..=8 {
        let r = params.a + (params.b - params.a) * i as f64 / 8.0;
        let y = ode.integrate(params.a, r, y0, 4000);
        let scale = closed(r).abs().max(1e-3);
        assert!(
            (y[0] - closed(r)).abs() / scale < 1e-9,
            "k={k} r={r}: shooting {} vs closed form {}",
            y[0],
            closed(r)
        );
    }
}

#[test]
fn sphere_constants_match_shooting() {
    check(FieldKind::LameSphere, 2.0, LameParams::default());
    check(
        FieldKind::LameSphere,
        2.0,
        LameParams {
            a: 0.7,
            b: 2.5,
            p_i: 3.0,
            lambda: 2.2,
            mu: 0.6,
        },
    );
}

#[test]
fn cylinder_constants_match_shooting() {
    check(FieldKind::LameCylinder, 1.0, LameParams::default());
    check(
        FieldKind::LameCylinder,
        1.0,
        LameParams {
            a: 1.5,
            b: 4.0,
            p_i: 0.25,
            lambda: -0.3,
            mu: 1.4,
        },
    );
}

#[test]
fn default_constants_are_exact_fractions() {
    let sphere = make_field(&FieldSpec::new(FieldKind::LameSphere(LameParams::default()), Chart::Cartesian)).unwrap();
    let (a, b) = sphere.lame_constants().unwrap();
    assert!((a - 1.0 / 35.0).abs() < 1e-15 && (b - 2.0 / 7.0).abs() < 1e-15);
    let cylinder = make_field(&FieldSpec::new(FieldKind::LameCylinder(LameParams::default()), Chart::Cartesian)).unwrap();
    let (a, b) = cylinder.lame_constants().unwrap();
    assert!((a - 1.0 / 12.0).abs() < 1e-15 && (b - 2.0 / 3.0).abs() < 1e-15);
}
