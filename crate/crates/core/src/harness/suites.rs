//! Randomized verification suites. Each suite sweeps fields, charts and
//! points and feeds every comparison into one [`Collector`].

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::charts::{pullback_displacement, Chart, ConstantField, MetricAtPoint, Point};
use crate::elasticity::{
    cn_residual_classical, cn_residual_form, cn_residual_gradcurl, strain_covariant, strain_lie, stress,
    traction_adapted, traction_cauchy, traction_form, volume_expansion, BoundaryPoint, ElasticModuli,
};
use crate::error::{Error, Result};
use crate::exterior::{
    codifferential, curl, divergence, exterior_derivative, flat, gradient, hodge_star, sharp, KForm, VecField,
};
use crate::harness::fields::{
    make_field, random_polynomial, rigid_generators, DisplacementField, FieldKind, FieldSpec, LameParams,
};
use crate::harness::report::{measure_ulps, Collector, Measurement, SuiteReport, Tolerance};
use crate::harness::sampling::{random_moduli, sample_point, sample_surface_point, SuiteConfig};
use crate::jets::{Jet2, Scalar};
use crate::lie::{lie_cov2, lie_cov2_product_rule, lie_oneform, lie_oneform_coordinate, lie_scalar, CovTensor2};
use crate::oracle;

/// Suite names accepted by [`run_suite`]; `all` runs the others in order.
pub const SUITES: [&str; 10] = [
    "jets_selftest",
    "structural",
    "bridge",
    "strain_equiv",
    "cn_equiv",
    "traction_equiv",
    "killing",
    "cross_chart",
    "lame",
    "all",
];

/// Routes that differentiate twice.
pub const TWO_ORDER: Tolerance = Tolerance::Relative(1e-9);
/// Routes that differentiate once.
pub const ONE_ORDER: Tolerance = Tolerance::Relative(1e-10);
/// Quantities that vanish identically.
pub const EXACT_ZERO: Tolerance = Tolerance::Absolute(1e-11);

/// Radii sampled inside the Lamé wall.
pub const LAME_RADII: usize = 50;

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let index = SUITES
        .iter()
        .position(|s| *s == name)
        .ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    let mut out = Collector::new(config.tol_rel);
    if name == "all" {
        for i in 0..SUITES.len() - 1 {
            run_one(i, config, &mut out)?;
        }
    } else {
        run_one(index, config, &mut out)?;
    }
    Ok(out.finish(name, config))
}

fn run_one(index: usize, config: &SuiteConfig, out: &mut Collector) -> Result<()> {
    let mut suite = Suite { index, config, out };
    match SUITES[index] {
        "jets_selftest" => suite.jets_selftest(),
        "structural" => suite.structural(),
        "bridge" => suite.bridge(),
        "strain_equiv" => suite.strain_equiv(),
        "cn_equiv" => suite.cn_equiv(),
        "traction_equiv" => suite.traction_equiv(),
        "killing" => suite.killing(),
        "cross_chart" => suite.cross_chart(),
        "lame" => suite.lame(),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

type Pair = (Vec<f64>, Vec<f64>);

/// Field, metric and displacement pair at one point.
struct Sample {
    m: MetricAtPoint,
    v: VecField,
    u: KForm,
}

impl Sample {
    fn new(field: &DisplacementField, chart: Chart, q: Point) -> Result<Sample> {
        let m = chart.metric_at(q)?;
        let v = field.at(chart, q)?;
        let u = flat(&m, &v)?;
        Ok(Sample { m, v, u })
    }
}

fn joined<'a>(s: &'a Result<Sample>, aux: &'a Result<Sample>) -> Result<(&'a Sample, &'a Sample)> {
    match (s, aux) {
        (Ok(s), Ok(a)) => Ok((s, a)),
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    }
}

/// Where a sample was taken, for the report.
struct Key {
    chart: Option<Chart>,
    point: Option<Point>,
    field: String,
}

fn vals(v: &VecField) -> Vec<f64> {
    v.values().to_vec()
}

fn tensor_vals(t: &CovTensor2) -> Vec<f64> {
    t.values().iter().flatten().copied().collect()
}

fn zeros_like(v: &[f64]) -> Vec<f64> {
    vec![0.0; v.len()]
}

fn against_zero(v: Vec<f64>) -> Pair {
    let z = zeros_like(&v);
    (v, z)
}

fn one_form_norm_sq(m: &MetricAtPoint, t: &KForm) -> f64 {
    let c = t.values();
    (0..3).map(|i| (0..3).map(|j| m.g_inv[i][j] * c[i] * c[j]).sum::<f64>()).sum()
}

/// `∂_r` of `normal_chart`, expressed in `chart` at `q`.
fn boundary(m: &MetricAtPoint, chart: Chart, normal_chart: Chart, q: Point) -> Result<BoundaryPoint> {
    if chart == normal_chart {
        BoundaryPoint::adapted(m, 0)
    } else {
        let n = pullback_displacement(normal_chart, chart, &ConstantField([1.0, 0.0, 0.0]), q)?;
        BoundaryPoint::new(m, n)
    }
}

/// Both operands of each traction route, for adapted and general charts.
struct Tractions {
    cauchy: Vec<f64>,
    form: Vec<f64>,
    adapted: Option<Vec<f64>>,
}

fn tractions(moduli: &ElasticModuli, s: &Sample, chart: Chart, normal_chart: Chart, q: Point) -> Result<Tractions> {
    let bp = boundary(&s.m, chart, normal_chart, q)?;
    let cauchy = traction_cauchy(moduli, &s.m, &s.u, &s.v, &bp)?.values();
    let form = traction_form(moduli, &s.m, &s.u, &s.v, &bp)?.values();
    let adapted = if chart == normal_chart {
        Some(traction_adapted(moduli, &s.m, &s.u, &s.v, 0)?.values())
    } else {
        None
    };
    Ok(Tractions { cauchy, form, adapted })
}

struct Suite<'a> {
    index: usize,
    config: &'a SuiteConfig,
    out: &'a mut Collector,
}

impl Suite<'_> {
    fn rng(&self, chart: Option<Chart>) -> ChaCha8Rng {
        self.config.rng(self.index, chart)
    }

    fn moduli(&self, rng: &mut ChaCha8Rng) -> Vec<ElasticModuli> {
        (0..self.config.moduli).map(|_| random_moduli(rng)).collect()
    }

    /// Runs one comparison against a shared setup; setup failures count
    /// as failures of every check that needed it.
    fn check<T>(&mut self, key: &Key, id: &str, tol: Tolerance, setup: &Result<T>, f: impl FnOnce(&T) -> Result<Pair>) {
        self.out.check(id, key.chart, tol, key.point, &key.field, || match setup {
            Ok(t) => f(t),
            Err(e) => Err(e.clone()),
        });
    }

    fn record(&mut self, key: &Key, id: &str, tol: Tolerance, m: Measurement) {
        self.out.record(id, key.chart, tol, key.point, &key.field, m);
    }

    /// Per chart: `fields` random polynomial fields (plus an auxiliary field
    /// each), `points` sample points per field.
    fn sweep(&mut self, mut body: impl FnMut(&mut Self, &Key, &Result<Sample>, &Result<Sample>)) -> Result<()> {
        for &chart in &self.config.charts.clone() {
            let mut rng = self.rng(Some(chart));
            for f in 0..self.config.fields {
                let field = make_field(&random_polynomial(&mut rng, chart))?;
                let aux = make_field(&random_polynomial(&mut rng, chart))?;
                for _ in 0..self.config.points {
                    let q = sample_point(&mut rng, chart);
                    let key = Key {
                        chart: Some(chart),
                        point: Some(q),
                        field: format!("random#{f}"),
                    };
                    let s = Sample::new(&field, chart, q);
                    let a = Sample::new(&aux, chart, q);
                    body(self, &key, &s, &a);
                }
            }
        }
        Ok(())
    }

    fn bridge(&mut self) -> Result<()> {
        self.sweep(|suite, key, s, aux| {
            let pair = joined(s, aux);
            suite.check(key, "bridge.gradient", TWO_ORDER, &pair, |(s, a)| {
                let f = KForm::scalar(s.m.site, a.v.components()[0], 2);
                Ok((vals(&gradient(&s.m, &f)?), vals(&oracle::grad_classical(&s.m, &f)?)))
            });
            suite.check(key, "bridge.divergence", TWO_ORDER, s, |s| {
                Ok((divergence(&s.m, &s.v)?.values(), oracle::div_classical(&s.m, &s.v)?.values()))
            });
            suite.check(key, "bridge.curl", TWO_ORDER, s, |s| {
                Ok((vals(&curl(&s.m, &s.v)?), vals(&oracle::curl_classical(&s.m, &s.v)?)))
            });
            suite.check(key, "bridge.codifferential", TWO_ORDER, s, |s| {
                let div = oracle::div_classical(&s.m, &s.v)?.scale(-1.0);
                Ok((codifferential(&s.m, &s.u)?.values(), div.values()))
            });
        })
    }

    fn strain_equiv(&mut self) -> Result<()> {
        self.sweep(|suite, key, s, aux| {
            let pair = joined(s, aux);
            suite.check(key, "strain.lie_vs_covariant", ONE_ORDER, s, |s| {
                Ok((tensor_vals(&strain_lie(&s.m, &s.v)?), tensor_vals(&strain_covariant(&s.m, &s.u)?)))
            });
            suite.check(key, "lie.metric_symmetric", Tolerance::Absolute(0.0), s, |s| {
                let l = lie_cov2(&s.v, &CovTensor2::metric(&s.m), &s.m)?.values();
                let transposed: Vec<f64> = (0..9).map(|k| l[k % 3][k / 3]).collect();
                Ok((l.iter().flatten().copied().collect(), transposed))
            });
            suite.check(key, "lie.oneform_routes", Tolerance::Relative(1e-11), &pair, |(s, a)| {
                Ok((lie_oneform(&s.v, &a.u)?.values(), lie_oneform_coordinate(&s.v, &a.u)?.values()))
            });
            let outer = |s: &Sample, a: &Sample| {
                let comps = std::array::from_fn(|i| std::array::from_fn(|j| s.u.component(i) * a.u.component(j)));
                CovTensor2::new(s.m.site, comps, 2)
            };
            suite.check(key, "lie.cov2_routes", ONE_ORDER, &pair, |(s, a)| {
                let t = outer(s, a);
                Ok((tensor_vals(&lie_cov2(&s.v, &t, &s.m)?), tensor_vals(&lie_cov2_product_rule(&s.v, &t, &s.m)?)))
            });
            suite.check(key, "lie.product_rule", ONE_ORDER, &pair, |(s, a)| {
                let t = outer(s, a);
                let f = KForm::scalar(s.m.site, a.v.components()[1], 2);
                let ft = t.scale_jet(f.component(0), f.order());
                let left = lie_cov2(&s.v, &ft, &s.m)?;
                let lf = lie_scalar(&s.v, &f)?;
                let right = t
                    .scale_jet(lf.component(0), lf.order())
                    .add(&lie_cov2(&s.v, &t, &s.m)?.scale_jet(f.component(0), 2))?;
                Ok((tensor_vals(&left), tensor_vals(&right)))
            });
        })
    }

    fn cn_equiv(&mut self) -> Result<()> {
        let mut rng = self.rng(None);
        let moduli = self.moduli(&mut rng);
        self.sweep(|suite, key, s, _| {
            for md in &moduli {
                let routes = s.as_ref().map_err(Clone::clone).and_then(|s| {
                    let classical = flat(&s.m, &cn_residual_classical(md, &s.m, &s.v)?)?.values();
                    let form = cn_residual_form(md, &s.m, &s.u)?.values();
                    let gradcurl = cn_residual_gradcurl(md, &s.m, &s.u)?.values();
                    let equilibrium = oracle::stress_divergence(&s.m, &stress(md, &s.m, &s.u, &s.v)?)?.values();
                    Ok([classical, form, gradcurl, equilibrium])
                });
                let pairs = [
                    ("cn.classical_vs_form", 0, 1),
                    ("cn.classical_vs_gradcurl", 0, 2),
                    ("cn.form_vs_gradcurl", 1, 2),
                    ("cn.stress_divergence", 3, 0),
                ];
                for (id, i, j) in pairs {
                    suite.check(key, id, TWO_ORDER, &routes, |r| Ok((r[i].clone(), r[j].clone())));
                }
            }
        })
    }

    fn traction_equiv(&mut self) -> Result<()> {
        let mut rng = self.rng(None);
        let moduli = self.moduli(&mut rng);
        for &chart in &self.config.charts.clone() {
            let mut rng = self.rng(Some(chart));
            for f in 0..self.config.fields {
                let field = make_field(&random_polynomial(&mut rng, chart))?;
                for p in 0..self.config.points {
                    let (q, normal_chart) = sample_surface_point(&mut rng, chart)?;
                    let key = Key {
                        chart: Some(chart),
                        point: Some(q),
                        field: format!("random#{f}"),
                    };
                    let md = moduli[(f * self.config.points + p) % moduli.len()];
                    let t = Sample::new(&field, chart, q).and_then(|s| tractions(&md, &s, chart, normal_chart, q));
                    self.check(&key, "traction.cauchy_vs_form", TWO_ORDER, &t, |t| {
                        Ok((t.cauchy.clone(), t.form.clone()))
                    });
                    if chart == normal_chart {
                        self.check(&key, "traction.cauchy_vs_adapted", TWO_ORDER, &t, |t| {
                            Ok((t.cauchy.clone(), t.adapted.clone().unwrap_or_default()))
                        });
                        self.check(&key, "traction.form_vs_adapted", TWO_ORDER, &t, |t| {
                            Ok((t.form.clone(), t.adapted.clone().unwrap_or_default()))
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn killing(&mut self) -> Result<()> {
        let mut rng = self.rng(None);
        let moduli = self.moduli(&mut rng);
        let generators: Vec<DisplacementField> = rigid_generators().iter().map(make_field).collect::<Result<_>>()?;
        for &chart in &self.config.charts.clone() {
            let mut rng = self.rng(Some(chart));
            for p in 0..self.config.points {
                let (q, normal_chart) = sample_surface_point(&mut rng, chart)?;
                let md = moduli[p % moduli.len()];
                for g in &generators {
                    let key = Key {
                        chart: Some(chart),
                        point: Some(q),
                        field: g.spec().label(),
                    };
                    let s = Sample::new(g, chart, q);
                    let checks: [(&str, fn(&ElasticModuli, &Sample) -> Result<Vec<f64>>); 8] = [
                        ("killing.strain_lie", |_, s| Ok(tensor_vals(&strain_lie(&s.m, &s.v)?))),
                        ("killing.strain_covariant", |_, s| Ok(tensor_vals(&strain_covariant(&s.m, &s.u)?))),
                        ("killing.stress", |md, s| Ok(tensor_vals(&stress(md, &s.m, &s.u, &s.v)?))),
                        ("killing.expansion", |_, s| Ok(volume_expansion(&s.m, &s.u)?.values())),
                        ("killing.cn_form", |md, s| Ok(cn_residual_form(md, &s.m, &s.u)?.values())),
                        ("killing.cn_gradcurl", |md, s| Ok(cn_residual_gradcurl(md, &s.m, &s.u)?.values())),
                        ("killing.cn_classical", |md, s| Ok(vals(&cn_residual_classical(md, &s.m, &s.v)?))),
                        ("killing.lie_metric", |_, s| {
                            Ok(tensor_vals(&lie_cov2(&s.v, &CovTensor2::metric(&s.m), &s.m)?))
                        }),
                    ];
                    for (id, f) in checks {
                        self.check(&key, id, EXACT_ZERO, &s, |s| Ok(against_zero(f(&md, s)?)));
                    }
                    let t = s
                        .as_ref()
                        .map_err(Clone::clone)
                        .and_then(|s| tractions(&md, s, chart, normal_chart, q));
                    self.check(&key, "killing.traction_cauchy", EXACT_ZERO, &t, |t| Ok(against_zero(t.cauchy.clone())));
                    self.check(&key, "killing.traction_form", EXACT_ZERO, &t, |t| Ok(against_zero(t.form.clone())));
                    if chart == normal_chart {
                        self.check(&key, "killing.traction_adapted", EXACT_ZERO, &t, |t| {
                            Ok(against_zero(t.adapted.clone().unwrap_or_default()))
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `e`, `ε:ε` and `|t|²` at the same physical point, evaluated in a
    /// curvilinear chart and in Cartesian coordinates.
    fn cross_chart(&mut self) -> Result<()> {
        let mut rng = self.rng(None);
        let moduli = self.moduli(&mut rng);
        let invariants = |field: &DisplacementField, md: &ElasticModuli, chart: Chart, normal_chart: Chart, q: Point| {
            let s = Sample::new(field, chart, q)?;
            let e = volume_expansion(&s.m, &s.u)?.values()[0];
            let strain = strain_lie(&s.m, &s.v)?.norm_sq(&s.m)?;
            let n = pullback_displacement(normal_chart, chart, &ConstantField([1.0, 0.0, 0.0]), q)?;
            let bp = BoundaryPoint::new(&s.m, n)?;
            let t = traction_cauchy(md, &s.m, &s.u, &s.v, &bp)?;
            Ok::<_, Error>([e, strain, one_form_norm_sq(&s.m, &t)])
        };
        for &chart in &self.config.charts.clone() {
            if chart == Chart::Cartesian {
                continue;
            }
            let mut rng = self.rng(Some(chart));
            for f in 0..self.config.fields {
                let field = make_field(&random_polynomial(&mut rng, Chart::Cartesian))?;
                let md = moduli[f % moduli.len()];
                for _ in 0..self.config.points {
                    let (q, normal_chart) = sample_surface_point(&mut rng, chart)?;
                    let key = Key {
                        chart: Some(chart),
                        point: Some(q),
                        field: format!("random#{f}@cartesian"),
                    };
                    let both = chart.to_cartesian(q).and_then(|x| {
                        Ok((
                            invariants(&field, &md, chart, normal_chart, q)?,
                            invariants(&field, &md, Chart::Cartesian, normal_chart, x)?,
                        ))
                    });
                    let names = ["cross_chart.expansion", "cross_chart.strain_norm", "cross_chart.traction_norm"];
                    for (k, id) in names.into_iter().enumerate() {
                        self.check(&key, id, TWO_ORDER, &both, |(a, b)| Ok((vec![a[k]], vec![b[k]])));
                    }
                }
            }
        }
        Ok(())
    }

    fn structural(&mut self) -> Result<()> {
        let key = Key {
            chart: None,
            point: None,
            field: "oracle.rs".to_string(),
        };
        let count = forbidden_oracle_calls(ORACLE_SOURCE).len() as f64;
        self.out
            .compare("structural.oracle_independence", key.chart, Tolerance::Absolute(0.0), None, &key.field, &[count], &[0.0]);
        self.sweep(|suite, key, s, aux| {
            let pair = joined(s, aux);
            let chart = key.chart.unwrap_or(Chart::Cartesian);
            let q = key.point.unwrap_or_default();
            suite.check(key, "structural.dd_0form", Tolerance::Absolute(1e-13), &pair, |(s, a)| {
                let f = KForm::scalar(s.m.site, a.v.components()[0], 2);
                Ok(against_zero(exterior_derivative(&exterior_derivative(&f)?)?.values()))
            });
            suite.check(key, "structural.dd_1form", Tolerance::Absolute(1e-13), s, |s| {
                Ok(against_zero(exterior_derivative(&exterior_derivative(&s.u)?)?.values()))
            });
            suite.check(key, "structural.star_star", Tolerance::Relative(1e-11), &pair, |(s, a)| {
                let c = *a.v.components();
                let site = s.m.site;
                let forms = [
                    KForm::scalar(site, c[0], 2),
                    s.u.clone(),
                    KForm::two_form(site, c, 2),
                    KForm::three_form(site, c[1], 2),
                ];
                let mut left = Vec::new();
                let mut right = Vec::new();
                for w in forms {
                    left.extend(hodge_star(&s.m, &hodge_star(&s.m, &w)?)?.values());
                    right.extend(w.values());
                }
                Ok((left, right))
            });
            suite.check(key, "structural.sharp_flat", Tolerance::Relative(1e-12), s, |s| {
                Ok((vals(&sharp(&s.m, &s.u)?), vals(&s.v)))
            });
            suite.check(key, "structural.flat_sharp", Tolerance::Relative(1e-12), &pair, |(s, a)| {
                let w = KForm::one_form(s.m.site, *a.v.components(), 2);
                Ok((flat(&s.m, &sharp(&s.m, &w)?)?.values(), w.values()))
            });
            suite.check(key, "structural.delta_delta", EXACT_ZERO, &pair, |(s, a)| {
                let c = *a.v.components();
                let two = KForm::two_form(s.m.site, c, 2);
                let three = KForm::three_form(s.m.site, c[2], 2);
                let mut out = codifferential(&s.m, &codifferential(&s.m, &two)?)?.values();
                out.extend(codifferential(&s.m, &codifferential(&s.m, &three)?)?.values());
                Ok(against_zero(out))
            });
            suite.check(key, "structural.metric_fd", Tolerance::Relative(1e-6), s, |s| {
                let fd = fd_metric(chart, q);
                Ok((s.m.g.iter().flatten().copied().collect(), fd.iter().flatten().copied().collect()))
            });
            suite.check(key, "structural.metric_compatibility", Tolerance::Absolute(1e-10), s, |s| {
                Ok(against_zero(compatibility_defect(&s.m)))
            });
            if chart == Chart::Cartesian {
                suite.check(key, "structural.cartesian_flat", Tolerance::Absolute(0.0), s, |s| {
                    let mut out: Vec<f64> = s.m.dg.iter().flatten().flatten().copied().collect();
                    out.extend(s.m.gamma.iter().flatten().flatten());
                    Ok(against_zero(out))
                });
            }
        })
    }

    fn jets_selftest(&mut self) -> Result<()> {
        let mut rng = self.rng(None);
        let n = self.config.fields * self.config.points;
        let key = Key {
            chart: None,
            point: None,
            field: "random jets".to_string(),
        };
        for _ in 0..n {
            let a = random_jet(&mut rng, 10.0);
            let b = random_jet(&mut rng, 10.0);
            let key = Key {
                point: Some([a.value, b.value, 0.0]),
                ..key_clone(&key)
            };
            for (id, m) in closed_form_errors(a, b) {
                self.record(&key, id, Tolerance::Ulps(4.0), m);
            }
        }
        for _ in 0..n {
            let [a, b, c] = std::array::from_fn(|_| random_jet(&mut rng, 1e3));
            let scale = |xs: &[Jet2]| xs.iter().map(|x| x.max_abs()).product::<f64>();
            let (ab, ba) = (a * b, b * a);
            self.record(&key, "jets.mul_commutative", Tolerance::Relative(1e-14), scaled(ab, ba, scale(&[a, b])));
            let (l, r) = ((a * b) * c, a * (b * c));
            self.record(&key, "jets.mul_associative", Tolerance::Relative(1e-14), scaled(l, r, scale(&[a, b, c])));
        }
        for _ in 0..n {
            let x: Point = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let key = Key {
                point: Some(x),
                ..key_clone(&key)
            };
            let jet = composite(Jet2::seeds(x));
            let fd = jet.as_ref().map_err(Clone::clone).and_then(|_| fd_derivatives(x));
            let both = jet.and_then(|j| Ok((j, fd?)));
            self.check(&key, "jets.fd_gradient", Tolerance::Relative(1e-6), &both, |(j, (g, _))| {
                Ok((j.grad.to_vec(), g.to_vec()))
            });
            self.check(&key, "jets.fd_hessian", Tolerance::Relative(1e-6), &both, |(j, (_, h))| {
                Ok((j.hess_matrix().iter().flatten().copied().collect(), h.iter().flatten().copied().collect()))
            });
        }
        Ok(())
    }

    /// Thick-walled sphere and cylinder under internal pressure: zero
    /// residual inside the wall, prescribed traction on both surfaces.
    fn lame(&mut self) -> Result<()> {
        let params = LameParams::default();
        let md = params.moduli()?;
        let cases = [
            ("lame.sphere", FieldKind::LameSphere(params), Chart::Spherical),
            ("lame.cylinder", FieldKind::LameCylinder(params), Chart::Cylindrical),
        ];
        for (prefix, kind, native) in cases {
            let field = make_field(&FieldSpec::new(kind, Chart::Cartesian))?;
            let mut rng = self.rng(Some(native));
            for _ in 0..LAME_RADII {
                let r = rng.gen_range(params.a..params.b);
                let angle = rng.gen_range(-PI..PI);
                let q = match native {
                    Chart::Spherical => [r, rng.gen_range(0.4..PI - 0.4), angle],
                    _ => [r, angle, rng.gen_range(-2.0..2.0)],
                };
                let x = native.to_cartesian(q)?;
                for (chart, point) in [(native, q), (Chart::Cartesian, x)] {
                    let key = Key {
                        chart: Some(chart),
                        point: Some(point),
                        field: field.spec().label(),
                    };
                    let s = Sample::new(&field, chart, point);
                    let lame_zero = Tolerance::Absolute(1e-9);
                    self.check(&key, &format!("{prefix}.cn_classical"), lame_zero, &s, |s| {
                        Ok(against_zero(vals(&cn_residual_classical(&md, &s.m, &s.v)?)))
                    });
                    self.check(&key, &format!("{prefix}.cn_form"), lame_zero, &s, |s| {
                        Ok(against_zero(cn_residual_form(&md, &s.m, &s.u)?.values()))
                    });
                    self.check(&key, &format!("{prefix}.cn_gradcurl"), lame_zero, &s, |s| {
                        Ok(against_zero(cn_residual_gradcurl(&md, &s.m, &s.u)?.values()))
                    });
                    self.check(&key, &format!("{prefix}.stress_divergence"), lame_zero, &s, |s| {
                        let sigma = stress(&md, &s.m, &s.u, &s.v)?;
                        Ok(against_zero(oracle::stress_divergence(&s.m, &sigma)?.values()))
                    });
                }
                for (surface, radius, pressure) in [("inner", params.a, params.p_i), ("outer", params.b, 0.0)] {
                    let mut qs = q;
                    qs[0] = radius;
                    let xs = native.to_cartesian(qs)?;
                    for (chart, point) in [(native, qs), (Chart::Cartesian, xs)] {
                        let key = Key {
                            chart: Some(chart),
                            point: Some(point),
                            field: field.spec().label(),
                        };
                        let t = Sample::new(&field, chart, point).and_then(|s| {
                            let bp = boundary(&s.m, chart, native, point)?;
                            let got = if chart == native {
                                traction_adapted(&md, &s.m, &s.u, &s.v, 0)?
                            } else {
                                traction_cauchy(&md, &s.m, &s.u, &s.v, &bp)?
                            };
                            let expected = bp.normal_form().scale(-pressure).values();
                            Ok((got.values(), expected))
                        });
                        self.check(&key, &format!("{prefix}.{surface}_traction"), Tolerance::Relative(1e-8), &t, |p| {
                            Ok(p.clone())
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn key_clone(k: &Key) -> Key {
    Key {
        chart: k.chart,
        point: k.point,
        field: k.field.clone(),
    }
}

/// Source of the oracle module, checked for calls into the form-based code.
pub const ORACLE_SOURCE: &str = include_str!("../oracle.rs");

/// Identifiers of the exterior, Lie and form-based elasticity operators.
pub const FORM_OPERATORS: [&str; 22] = [
    "flat",
    "sharp",
    "exterior_derivative",
    "hodge_star",
    "codifferential",
    "wedge",
    "interior_product",
    "gradient",
    "divergence",
    "curl",
    "lie_bracket",
    "lie_scalar",
    "lie_oneform",
    "lie_oneform_coordinate",
    "lie_cov2",
    "lie_cov2_product_rule",
    "strain_lie",
    "strain_covariant",
    "volume_expansion",
    "navier_operator",
    "cn_residual_form",
    "cn_residual_gradcurl",
];

/// Occurrences of form-operator identifiers in code (comments excluded).
pub fn forbidden_oracle_calls(source: &str) -> Vec<String> {
    let code = source.lines().map(|l| l.split("//").next().unwrap_or("")).collect::<Vec<_>>().join("\n");
    code.split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .filter(|tok| FORM_OPERATORS.contains(tok))
        .map(str::to_string)
        .collect()
}

fn scaled(a: Jet2, b: Jet2, scale: f64) -> Measurement {
    let abs = (a - b).max_abs();
    let rel = abs / scale.max(f64::MIN_POSITIVE);
    Measurement { abs, rel, score: rel }
}

fn random_jet(rng: &mut ChaCha8Rng, bound: f64) -> Jet2 {
    let mut u = || rng.gen_range(-bound..bound);
    Jet2 {
        value: u(),
        grad: std::array::from_fn(|_| u()),
        hess: std::array::from_fn(|_| u()),
    }
}

fn random_nonzero(a: Jet2) -> Jet2 {
    Jet2 {
        value: if a.value.abs() < 0.5 { a.value.signum() * 0.5 + a.value } else { a.value },
        ..a
    }
}

fn random_positive(a: Jet2) -> Jet2 {
    Jet2 {
        value: a.value.abs().max(0.5),
        ..a
    }
}

/// Value, gradient and Hessian channels with the magnitudes of the terms
/// that produce them.
struct Channels {
    values: Vec<f64>,
    scales: Vec<f64>,
}

fn channels_of(j: &Jet2) -> Vec<f64> {
    let mut v = vec![j.value];
    v.extend(j.grad);
    v.extend(j.hess);
    v
}

/// Closed form of `f(a)` from `f`, `f'`, `f''` at `a.value`.
fn unary_reference(a: Jet2, f0: f64, f1: f64, f2: f64) -> Channels {
    let mut values = vec![f0];
    let mut scales = vec![f0];
    for i in 0..3 {
        values.push(f1 * a.grad[i]);
        scales.push(f1 * a.grad[i]);
    }
    for i in 0..3 {
        for j in i..3 {
            values.push(f2 * a.grad[i] * a.grad[j] + f1 * a.hess_at(i, j));
            scales.push((f2 * a.grad[i] * a.grad[j]).abs() + (f1 * a.hess_at(i, j)).abs());
        }
    }
    Channels { values, scales }
}

fn binary_reference(a: Jet2, b: Jet2, op: &str) -> Channels {
    let mut values = Vec::with_capacity(10);
    let mut scales = Vec::with_capacity(10);
    let mut push = |terms: &[f64]| {
        values.push(terms.iter().sum());
        scales.push(terms.iter().map(|t| t.abs()).sum());
    };
    let (x, y) = (a.value, b.value);
    match op {
        "add" | "sub" => {
            let s = if op == "add" { 1.0 } else { -1.0 };
            push(&[x, s * y]);
            for i in 0..3 {
                push(&[a.grad[i], s * b.grad[i]]);
            }
            for i in 0..3 {
                for j in i..3 {
                    push(&[a.hess_at(i, j), s * b.hess_at(i, j)]);
                }
            }
        }
        "mul" => {
            push(&[x * y]);
            for i in 0..3 {
                push(&[x * b.grad[i], y * a.grad[i]]);
            }
            for i in 0..3 {
                for j in i..3 {
                    push(&[
                        x * b.hess_at(i, j),
                        y * a.hess_at(i, j),
                        a.grad[i] * b.grad[j],
                        a.grad[j] * b.grad[i],
                    ]);
                }
            }
        }
        _ => {
            // quotient x / y
            push(&[x / y]);
            for i in 0..3 {
                push(&[a.grad[i] / y, -x * b.grad[i] / (y * y)]);
            }
            for i in 0..3 {
                for j in i..3 {
                    push(&[
                        a.hess_at(i, j) / y,
                        -a.grad[i] * b.grad[j] / (y * y),
                        -a.grad[j] * b.grad[i] / (y * y),
                        -x * b.hess_at(i, j) / (y * y),
                        2.0 * x * b.grad[i] * b.grad[j] / (y * y * y),
                    ]);
                }
            }
        }
    }
    Channels { values, scales }
}

fn closed_form_errors(a: Jet2, b: Jet2) -> Vec<(&'static str, Measurement)> {
    let nz = random_nonzero(b);
    let pos = random_positive(a);
    let v = a.value;
    let cases: Vec<(&'static str, Result<Jet2>, Channels)> = vec![
        ("jets.closed_form.add", Ok(a + b), binary_reference(a, b, "add")),
        ("jets.closed_form.sub", Ok(a - b), binary_reference(a, b, "sub")),
        ("jets.closed_form.mul", Ok(a * b), binary_reference(a, b, "mul")),
        ("jets.closed_form.div", a.div(nz), binary_reference(a, nz, "div")),
        ("jets.closed_form.recip", nz.recip(), {
            let y = nz.value;
            unary_reference(nz, 1.0 / y, -1.0 / (y * y), 2.0 / (y * y * y))
        }),
        ("jets.closed_form.sqrt", pos.sqrt(), {
            let y = pos.value;
            unary_reference(pos, y.sqrt(), 0.5 / y.sqrt(), -0.25 / (y * y.sqrt()))
        }),
        ("jets.closed_form.sin", Ok(a.sin()), unary_reference(a, v.sin(), v.cos(), -v.sin())),
        ("jets.closed_form.cos", Ok(a.cos()), unary_reference(a, v.cos(), -v.sin(), -v.cos())),
        ("jets.closed_form.atan", Ok(a.atan()), {
            let d = 1.0 + v * v;
            unary_reference(a, v.atan(), 1.0 / d, -2.0 * v / (d * d))
        }),
    ];
    cases
        .into_iter()
        .map(|(id, jet, reference)| {
            let m = match jet {
                Ok(j) => measure_ulps(&channels_of(&j), &reference.values, &reference.scales),
                Err(_) => Measurement {
                    abs: f64::NAN,
                    rel: f64::NAN,
                    score: f64::NAN,
                },
            };
            (id, m)
        })
        .collect()
}

/// Smooth composite of every elementary operation, regular on `[−1, 1]³`.
fn composite<S: Scalar>(x: [S; 3]) -> Result<S> {
    let one = S::constant(1.0);
    let wave = (x[0] * x[1]).sin();
    let root = (S::constant(1.5) + x[2] * x[2]).sqrt()?;
    let denom = S::constant(2.0) + x[0].cos();
    let twist = (x[1] - x[2] * x[2]).atan();
    let tail = (S::constant(2.5) + x[0] * x[2]).recip()?;
    Ok((wave * root).div(denom)? + twist + tail * (one + x[1] * x[1] * x[1]))
}

/// Central differences of the value channel: step `1e-5` for the gradient,
/// `1e-4` for the Hessian.
fn fd_derivatives(x: Point) -> Result<([f64; 3], [[f64; 3]; 3])> {
    let f = |p: Point| composite::<f64>(p);
    let shifted = |d: [(usize, f64); 2]| {
        let mut p = x;
        for (k, h) in d {
            p[k] += h;
        }
        f(p)
    };
    let h = 1e-5;
    let mut grad = [0.0; 3];
    for k in 0..3 {
        grad[k] = (shifted([(k, h), (k, 0.0)])? - shifted([(k, -h), (k, 0.0)])?) / (2.0 * h);
    }
    let h = 1e-4;
    let f0 = f(x)?;
    let mut hess = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            hess[i][j] = if i == j {
                (shifted([(i, h), (i, 0.0)])? - 2.0 * f0 + shifted([(i, -h), (i, 0.0)])?) / (h * h)
            } else {
                (shifted([(i, h), (j, h)])? - shifted([(i, h), (j, -h)])? - shifted([(i, -h), (j, h)])?
                    + shifted([(i, -h), (j, -h)])?)
                    / (4.0 * h * h)
            };
        }
    }
    Ok((grad, hess))
}

fn fd_metric(chart: Chart, q: Point) -> [[f64; 3]; 3] {
    let h = 1e-5;
    let tangents: [[f64; 3]; 3] = std::array::from_fn(|i| {
        let (mut qp, mut qm) = (q, q);
        qp[i] += h;
        qm[i] -= h;
        let (xp, xm) = (chart.embed(qp), chart.embed(qm));
        std::array::from_fn(|a| (xp[a] - xm[a]) / (2.0 * h))
    });
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|a| tangents[i][a] * tangents[j][a]).sum()))
}

/// `g_ij,k − g_mj Γ^m_ik − g_im Γ^m_jk` for all index triples.
fn compatibility_defect(m: &MetricAtPoint) -> Vec<f64> {
    let mut out = Vec::with_capacity(27);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut d = m.dg[i][j][k];
                for l in 0..3 {
                    d -= m.g[l][j] * m.gamma[l][i][k] + m.g[i][l] * m.gamma[l][j][k];
                }
                out.push(d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite() {
        assert!(matches!(
            run_suite("nope", &SuiteConfig::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn bad_config() {
        let c = SuiteConfig {
            fields: 0,
            ..SuiteConfig::default()
        };
        assert!(matches!(run_suite("bridge", &c), Err(Error::Config(_))));
    }

    #[test]
    fn oracle_scan_sees_calls_but_not_comments() {
        let src = "// flat(x)\nlet a = oracle_thing(1);\nlet b = flat(&m, &v);\nlet c = stress_divergence(m);";
        assert_eq!(forbidden_oracle_calls(src), vec!["flat".to_string()]);
        assert!(forbidden_oracle_calls(ORACLE_SOURCE).is_empty());
    }

    #[test]
    fn fd_reference_matches_jets_at_origin_neighbourhood() {
        let x = [0.3, -0.2, 0.5];
        let jet = composite(Jet2::seeds(x)).unwrap();
        let (g, h) = fd_derivatives(x).unwrap();
        for i in 0..3 {
            assert!((jet.grad[i] - g[i]).abs() < 1e-8);
            for j in 0..3 {
                assert!((jet.hess_at(i, j) - h[i][j]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn small_config_runs_every_suite() {
        let c = SuiteConfig {
            fields: 2,
            points: 3,
            moduli: 2,
            ..SuiteConfig::default()
        };
        let r = run_suite("all", &c).unwrap();
        let failing: Vec<_> = r.checks.iter().filter(|c| !c.pass).collect();
        assert!(failing.is_empty(), "{failing:#?}");
    }
}
