use elastoforms::harness::{make_field, FieldKind, FieldSpec, LameParams, Preset};
use elastoforms::{Chart, Error};

#[test]
fn polynomial_parses_with_default_chart() {
    let spec = FieldSpec::from_json(
        r#"{"kind":"polynomial","params":[{"target_component":1,"exponents":[1,2,0],"coefficient":-0.5}]}"#,
    )
    .unwrap();
    assert_eq!(spec.chart, Chart::Cartesian);
    let FieldKind::Polynomial(terms) = &spec.kind else { panic!("{spec:?}") };
    assert_eq!(terms[0].exponents, [1, 2, 0]);
    let v = make_field(&spec).unwrap().at(Chart::Cartesian, [2.0, 3.0, 1.0]).unwrap();
    assert_eq!(v.components()[1].value, -9.0);
}

#[test]
fn curvilinear_polynomial_keeps_its_chart() {
    let spec = FieldSpec::from_json(
        r#"{"kind":"polynomial","chart":"spherical","params":[{"target_component":0,"exponents":[1,0,0],"coefficient":1.0}]}"#,
    )
    .unwrap();
    assert_eq!(spec.chart, Chart::Spherical);
    let field = make_field(&spec).unwrap();
    assert_eq!(field.source_chart(), Chart::Spherical);
}

#[test]
fn every_kind_round_trips() {
    let kinds = vec![
        FieldKind::RigidTranslation { direction: [1.0, 0.0, 0.0] },
        FieldKind::RigidRotation { axis: [0.0, 0.0, 1.0] },
        FieldKind::Dilation { scale: 0.1 },
        FieldKind::LameSphere(LameParams::default()),
        FieldKind::LameCylinder(LameParams::default()),
        FieldKind::CustomPreset { name: Preset::SimpleShear },
    ];
    for kind in kinds {
        let spec = FieldSpec::new(kind, Chart::Cartesian);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(FieldSpec::from_json(&text).unwrap(), spec, "{text}");
        make_field(&spec).unwrap();
    }
}

#[test]
fn malformed_specs_are_rejected() {
    for text in [
        "not json",
        r#"{"kind":"spiral"}"#,
        r#"{"kind":"dilation","params":{"scale":1.0},"chart":"cylindrical"}"#,
        r#"{"kind":"polynomial","params":[{"target_component":0,"exponents":[2,2,0],"coefficient":1.0}]}"#,
        r#"{"kind":"polynomial","params":[{"target_component":3,"exponents":[0,0,0],"coefficient":1.0}]}"#,
        r#"{"kind":"lame_sphere","params":{"a":2.0,"b":1.0,"p_i":1.0,"lambda":1.0,"mu":1.0}}"#,
        r#"{"kind":"lame_sphere","params":{"a":1.0,"b":2.0,"p_i":1.0,"lambda":1.0,"mu":-1.0}}"#,
    ] {
        let result = FieldSpec::from_json(text).and_then(|s| make_field(&s));
        assert!(
            matches!(result, Err(Error::InvalidSpec(_) | Error::InvalidModuli { .. })),
            "{text}: {result:?}"
        );
    }
}
