//! Which suite checks exercise each module invariant.

/// One invariant and the `(suite, check id)` pairs that execute it.
#[derive(Clone, Copy, Debug)]
pub struct Invariant {
    pub module: &'static str,
    pub statement: &'static str,
    pub coverage: &'static [(&'static str, &'static str)],
}

pub const INVARIANTS: &[Invariant] = &[
    Invariant {
        module: "jets",
        statement: "elementary operations match closed-form derivative formulas within 4 ulps",
        coverage: &[
            ("jets_selftest", "jets.closed_form.add"),
            ("jets_selftest", "jets.closed_form.sub"),
            ("jets_selftest", "jets.closed_form.mul"),
            ("jets_selftest", "jets.closed_form.div"),
            ("jets_selftest", "jets.closed_form.recip"),
            ("jets_selftest", "jets.closed_form.sqrt"),
            ("jets_selftest", "jets.closed_form.sin"),
            ("jets_selftest", "jets.closed_form.cos"),
            ("jets_selftest", "jets.closed_form.atan"),
        ],
    },
    Invariant {
        module: "jets",
        statement: "multiplication is commutative and associative within 1e-14 relative",
        coverage: &[
            ("jets_selftest", "jets.mul_commutative"),
            ("jets_selftest", "jets.mul_associative"),
        ],
    },
    Invariant {
        module: "jets",
        statement: "gradient and Hessian of a composite agree with central differences within 1e-6",
        coverage: &[("jets_selftest", "jets.fd_gradient"), ("jets_selftest", "jets.fd_hessian")],
    },
    Invariant {
        module: "charts",
        statement: "metric matches finite differences of the embedding within 1e-6",
        coverage: &[("structural", "structural.metric_fd")],
    },
    Invariant {
        module: "charts",
        statement: "Christoffel symbols are metric compatible within 1e-10",
        coverage: &[("structural", "structural.metric_compatibility")],
    },
    Invariant {
        module: "charts",
        statement: "Cartesian metric derivatives and Christoffel symbols vanish identically",
        coverage: &[("structural", "structural.cartesian_flat")],
    },
    Invariant {
        module: "exterior",
        statement: "d∘d = 0 on 0- and 1-forms",
        coverage: &[("structural", "structural.dd_0form"), ("structural", "structural.dd_1form")],
    },
    Invariant {
        module: "exterior",
        statement: "⋆⋆ = id on every degree",
        coverage: &[("structural", "structural.star_star")],
    },
    Invariant {
        module: "exterior",
        statement: "♭ and ♯ are mutually inverse",
        coverage: &[("structural", "structural.sharp_flat"), ("structural", "structural.flat_sharp")],
    },
    Invariant {
        module: "exterior",
        statement: "δ∘δ = 0 on 2- and 3-forms",
        coverage: &[("structural", "structural.delta_delta")],
    },
    Invariant {
        module: "exterior",
        statement: "♯d, ⋆d⋆♭ and ♯⋆d♭ equal the classical gradient, divergence and curl",
        coverage: &[
            ("bridge", "bridge.gradient"),
            ("bridge", "bridge.divergence"),
            ("bridge", "bridge.curl"),
        ],
    },
    Invariant {
        module: "exterior",
        statement: "δ on one-forms is minus the classical divergence of the raised field",
        coverage: &[("bridge", "bridge.codifferential")],
    },
    Invariant {
        module: "lie",
        statement: "Cartan and coordinate routes for the Lie derivative of one-forms agree",
        coverage: &[("strain_equiv", "lie.oneform_routes")],
    },
    Invariant {
        module: "lie",
        statement: "L_v g is exactly symmetric and vanishes for rigid motions",
        coverage: &[("strain_equiv", "lie.metric_symmetric"), ("killing", "killing.lie_metric")],
    },
    Invariant {
        module: "lie",
        statement: "L_v(f t) = (L_v f) t + f L_v t, and the tensor-product route agrees",
        coverage: &[("strain_equiv", "lie.product_rule"), ("strain_equiv", "lie.cov2_routes")],
    },
    Invariant {
        module: "elasticity",
        statement: "½ L_v g equals the covariant-derivative strain",
        coverage: &[("strain_equiv", "strain.lie_vs_covariant")],
    },
    Invariant {
        module: "elasticity",
        statement: "classical, grad/curl and form Cauchy–Navier residuals agree pairwise",
        coverage: &[
            ("cn_equiv", "cn.classical_vs_form"),
            ("cn_equiv", "cn.classical_vs_gradcurl"),
            ("cn_equiv", "cn.form_vs_gradcurl"),
        ],
    },
    Invariant {
        module: "elasticity",
        statement: "Cauchy, form and adapted traction routes agree",
        coverage: &[
            ("traction_equiv", "traction.cauchy_vs_form"),
            ("traction_equiv", "traction.cauchy_vs_adapted"),
            ("traction_equiv", "traction.form_vs_adapted"),
        ],
    },
    Invariant {
        module: "elasticity",
        statement: "rigid motions produce zero strain, stress, expansion, traction and residual",
        coverage: &[
            ("killing", "killing.strain_lie"),
            ("killing", "killing.strain_covariant"),
            ("killing", "killing.stress"),
            ("killing", "killing.expansion"),
            ("killing", "killing.traction_cauchy"),
            ("killing", "killing.traction_form"),
            ("killing", "killing.traction_adapted"),
            ("killing", "killing.cn_form"),
            ("killing", "killing.cn_gradcurl"),
            ("killing", "killing.cn_classical"),
        ],
    },
    Invariant {
        module: "elasticity",
        statement: "e, ε:ε and |t|² agree between Cartesian and curvilinear evaluations",
        coverage: &[
            ("cross_chart", "cross_chart.expansion"),
            ("cross_chart", "cross_chart.strain_norm"),
            ("cross_chart", "cross_chart.traction_norm"),
        ],
    },
    Invariant {
        module: "oracle",
        statement: "∇·σ equals the Cauchy–Navier residual routes",
        coverage: &[("cn_equiv", "cn.stress_divergence")],
    },
    Invariant {
        module: "oracle",
        statement: "oracle operators do not call form-based operators",
        coverage: &[("structural", "structural.oracle_independence")],
    },
    Invariant {
        module: "oracle",
        statement: "the Lamé field is a zero-residual, equilibrated witness with the prescribed surface tractions",
        coverage: &[
            ("lame", "lame.sphere.cn_classical"),
            ("lame", "lame.sphere.cn_form"),
            ("lame", "lame.sphere.stress_divergence"),
            ("lame", "lame.sphere.inner_traction"),
            ("lame", "lame.sphere.outer_traction"),
            ("lame", "lame.cylinder.cn_classical"),
            ("lame", "lame.cylinder.inner_traction"),
        ],
    },
];
