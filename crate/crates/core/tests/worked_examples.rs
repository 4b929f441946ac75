//! Hand-checkable values for every operation, on the catalog surfaces and on
//! small constructions.

use kdelta::builder::{self, curve_count_check, hj_evaluate, hj_expand, PointSpec};
use kdelta::catalog::{
    build_config, build_config_named, classify, hilbert_series_check, swapped_solution_set_up_to,
    two_negative_check, volume_formula, ConfigName, EvidenceItem, Recipe, Status,
};
use kdelta::kstab::{
    alpha_delta_bounds, beta, delta_report_for_path, liu_test, restricted_profile, LiuVerdict,
    PointMode, Verdict,
};
use kdelta::rational::{q, qi};
use kdelta::zariski::PiecewiseQuadratic;
use kdelta::{
    volume_function, zariski_decompose, zariski_path, Error, FlagPointSpec, Rational, SurfaceModel,
};
use num_traits::Zero;

fn model(config: &str, label: &str) -> SurfaceModel {
    build_config_named(config)
        .unwrap()
        .model(label)
        .unwrap()
        .clone()
}

fn poly(f: &PiecewiseQuadratic, t: &Rational) -> [Rational; 3] {
    let i = f
        .breakpoints
        .windows(2)
        .position(|w| &w[0] <= t && t <= &w[1])
        .unwrap();
    f.segments[i].clone()
}

#[test]
fn intersection_numbers_of_the_326_surface() {
    let m = model("S326", "L1");
    assert_eq!(m.pair_curves("L1", "C1").unwrap(), q(4, 3));
    assert_eq!(m.self_intersection("L1").unwrap(), q(-5, 3));
    assert_eq!(m.self_intersection("C1").unwrap(), q(-2, 3));
    let zero = m
        .pair(
            m.class_of("L1").unwrap(),
            &kdelta::ClassVector::zero(m.dim()),
        )
        .unwrap();
    assert!(zero.is_zero());

    let seed = builder::seed_wps(3).unwrap();
    let l = seed.basis_vector("l").unwrap();
    assert_eq!(seed.pair(&l, &l).unwrap(), q(1, 3));
}

#[test]
fn orthogonalize_gives_printed_pullbacks() {
    let m = model("S326", "L1");
    let c1 = m.class_of("C1").unwrap().clone();
    let got = m.orthogonalize(&c1, &["L1"]).unwrap();
    let want = m
        .class_from_curves(&[("C1", qi(1)), ("L1", q(4, 5))])
        .unwrap();
    assert_eq!(got, want);

    let l1 = m.class_of("L1").unwrap();
    let already = m.orthogonalize(&got, &["L1"]).unwrap();
    assert_eq!(already, got);
    assert!(m.pair(&already, l1).unwrap().is_zero());

    let m2 = model("S326", "E");
    let pulled = m2.anticanonical_pullback().unwrap();
    let want = m2
        .class_from_curves(&[("C2", qi(1)), ("L2", q(4, 5)), ("E", q(3, 5))])
        .unwrap();
    assert_eq!(pulled, want);
}

#[test]
fn negative_definiteness_examples() {
    let m2 = model("S326", "E");
    assert!(m2.is_negative_definite(&["C2", "L2"]).unwrap());
    assert!(m2.is_negative_definite(&["e1"]).unwrap());
    let lines = build_config(ConfigName::P2TwoLines(2, 2)).unwrap();
    let s1 = lines.model("S1").unwrap();
    assert_eq!(s1.self_intersection("Ln").unwrap(), qi(-2));
    assert_eq!(s1.pair_curves("Ln", "Lm").unwrap(), qi(1));
    assert!(s1.is_negative_definite(&["Ln", "Lm"]).unwrap());
    assert!(matches!(
        s1.is_negative_definite(&["nope"]),
        Err(Error::UnknownCurve(_))
    ));
}

#[test]
fn log_discrepancies() {
    assert_eq!(model("S326", "L1").log_discrepancy("L1").unwrap(), q(4, 5));
    let m2 = model("S326", "E");
    let a = m2.solve_discrepancies(&["L2", "E"]).unwrap();
    assert_eq!(a["E"], q(3, 5));
    for n in 2..=5i64 {
        for mm in 2..=n {
            let c = build_config(ConfigName::SnmN2(n as u64, mm as u64)).unwrap();
            let (s, _) = c.flag("L").unwrap();
            assert_eq!(s.log_discrepancy("L").unwrap(), q(n + 1, mm * n - 1));
        }
    }
}

#[test]
fn seeds() {
    let p2 = builder::seed_wps(1).unwrap();
    assert_eq!(p2.degree().unwrap(), qi(9));
    assert!(p2.surface_singularities().is_empty());
    assert_eq!(builder::seed_wps(3).unwrap().degree().unwrap(), q(25, 3));
    let w5 = builder::seed_wps(5).unwrap();
    let s = &w5.singularities()[0];
    assert_eq!((s.r, s.a, s.resolution_chain.clone()), (5, 1, vec![5]));
}

#[test]
fn blow_ups() {
    let p2 = builder::seed_p2();
    let one = builder::blow_up(&p2, &PointSpec::general("x")).unwrap();
    assert_eq!(one.degree().unwrap(), qi(8));

    // P(1,1,3) with L and C through the vertex, blown up at seven points.
    let s = Recipe::wps(3)
        .curve("L", 1, 1)
        .curve("C", 4, 1)
        .blow_up("e1", &[("L", 1)])
        .blow_up("e2", &[("C", 1)])
        .blow_up("e3", &[("C", 1)])
        .blow_up("e4", &[("C", 1)])
        .blow_up("e5", &[("C", 1)])
        .blow_up("e6", &[("C", 1)])
        .blow_up("e7", &[("C", 1)])
        .file("S")
        .build()
        .unwrap();
    assert_eq!(s.degree().unwrap(), q(4, 3));
    assert_eq!(s.self_intersection("L").unwrap(), q(-2, 3));
    assert_eq!(s.self_intersection("C").unwrap(), q(-2, 3));
    let lc = s.class_from_curves(&[("L", qi(1)), ("C", qi(1))]).unwrap();
    assert_eq!(lc, s.anticanonical());

    let before = s.self_intersection("L").unwrap();
    let after = builder::blow_up(&s, &PointSpec::on("ep", &[("L", 1)])).unwrap();
    assert_eq!(after.self_intersection("L").unwrap(), before - qi(1));

    let mut at_vertex = PointSpec::on("bad", &[("L", 1)]);
    at_vertex.at_singularity = Some(builder::SEED_VERTEX.to_string());
    assert!(builder::blow_up(&s, &at_vertex).is_err());
}

#[test]
fn weighted_blow_ups() {
    let m2 = model("S326", "E");
    assert_eq!(m2.self_intersection("E").unwrap(), qi(-3));
    assert_eq!(m2.self_intersection("L2").unwrap(), qi(-2));
    assert_eq!(m2.self_intersection("C2").unwrap(), qi(-1));
    assert_eq!(m2.pair_curves("L2", "E").unwrap(), qi(1));
    assert_eq!(m2.pair_curves("C2", "E").unwrap(), qi(1));

    let m427 = model("S427", "E");
    assert_eq!(m427.self_intersection("E").unwrap(), qi(-4));
    assert_eq!(m427.pair_curves("L2", "E").unwrap(), qi(1));
    assert_eq!(m427.pair_curves("C2", "E").unwrap(), qi(1));

    // r = 2 is crepant: K does not move.
    let seed = builder::seed_wps(2).unwrap();
    let up = builder::weighted_blow_up_11(&seed, "O", "E").unwrap();
    let k = up.canonical().clone();
    let e = up.class_of("E").unwrap();
    assert!(up.pair(&k, e).unwrap().is_zero());
    assert_eq!(up.degree().unwrap(), seed.degree().unwrap());
}

#[test]
fn contractions() {
    let p2 = builder::seed_p2();
    let one = builder::blow_up(&p2, &PointSpec::general("x")).unwrap();
    let back = builder::contract(&one, &["x"]).unwrap();
    assert_eq!(back.degree().unwrap(), qi(9));
    assert!(back.surface_singularities().is_empty());

    // Chain (-2, -4) from two lines in the plane.
    let mut r = Recipe::wps(1).curve("A", 1, 0).curve("B", 1, 0);
    for i in 1..=3 {
        r = r.blow_up(&format!("a{i}"), &[("A", 1)]);
    }
    for i in 1..=5 {
        r = r.blow_up(&format!("b{i}"), &[("B", 1)]);
    }
    let m = r.contract(&["A", "B"]).file("chain").build().unwrap();
    let sing = m.surface_singularities();
    assert_eq!(sing.len(), 1);
    assert_eq!((sing[0].r, sing[0].a), (7, 4));

    let snm = build_config(ConfigName::Snm(3, 2, 0)).unwrap();
    assert_eq!(snm.models[0].1.degree().unwrap(), q(32, 5));
    let snm5 = build_config(ConfigName::Snm(3, 2, 5)).unwrap();
    assert_eq!(snm5.models[0].1.degree().unwrap(), q(7, 5));

    let not_nd = Recipe::wps(1)
        .curve("A", 1, 0)
        .contract(&["A"])
        .file("bad")
        .build();
    assert!(matches!(
        not_nd,
        Err(Error::NotNegativeDefinite(_)) | Err(Error::InvalidStep { .. })
    ));
}

#[test]
fn continued_fractions() {
    assert_eq!(hj_expand(3, 1).unwrap(), vec![3]);
    assert_eq!(hj_expand(2, 1).unwrap(), vec![2]);
    assert_eq!(hj_expand(5, 3).unwrap(), vec![2, 3]);
    assert_eq!(hj_evaluate(&[4, 3]).unwrap(), (11, 3));
    assert_eq!(hj_evaluate(&[3, 4]).unwrap(), (11, 4));
    assert_eq!(hj_evaluate(&[6]).unwrap(), (6, 1));
    assert_eq!(hj_evaluate(&[3, 3]).unwrap(), (8, 3));
    assert!(hj_expand(6, 4).is_err());
    assert!(hj_evaluate(&[3, 1]).is_err());
}

#[test]
fn curve_counts() {
    for n in 2..=8 {
        let c = curve_count_check(n, 3 * n + 4, 3, n + 2, 2);
        assert_eq!(
            (c.conditions, c.sublinear_dim, c.exists),
            (6 * n + 14, 6 * n + 14, true)
        );
        let c = curve_count_check(n, 4 * n + 5, 4, n + 2, 3);
        assert_eq!(
            (c.conditions, c.sublinear_dim, c.exists),
            (10 * n + 23, 10 * n + 23, true)
        );
    }
    let c = curve_count_check(3, 2, 1, 0, 0);
    assert_eq!(c.conditions, 0);
    assert!(c.exists);
}

#[test]
fn zariski_examples() {
    let m = model("S326", "L1");
    let d = m.anticanonical_pullback().unwrap();
    let z = zariski_decompose(&m, &d).unwrap();
    assert!(z.negative.is_empty());
    assert_eq!(z.positive, d);

    let l1 = m.class_of("L1").unwrap();
    let slice = d.add_scaled(&q(-1, 2), l1);
    let z = zariski_decompose(&m, &slice).unwrap();
    assert_eq!(z.negative.len(), 1);
    assert_eq!(z.negative["C1"], q(2, 5));

    let lines = build_config(ConfigName::P2TwoLines(3, 3)).unwrap();
    let s1 = lines.model("S1").unwrap();
    let z = zariski_decompose(s1, &s1.anticanonical()).unwrap();
    assert_eq!(z.negative["Ln"], q(1, 2));
    assert_eq!(z.negative["Lm"], q(1, 2));
}

#[test]
fn chamber_walks() {
    let path = zariski_path(&model("S326", "L1"), "L1").unwrap();
    assert_eq!(path.breakpoints(), vec![qi(0), q(3, 10), q(4, 5)]);
    let vol = volume_function(&path).unwrap();
    assert_eq!(poly(&vol, &q(1, 10)), [q(2, 5), qi(0), q(-5, 3)]);
    assert_eq!(poly(&vol, &q(1, 2)), [q(16, 25), q(-8, 5), qi(1)]);
    assert_eq!(vol.integrate(&qi(0), &q(3, 10)).unwrap(), q(21, 200));
    assert_eq!(vol.integrate(&q(3, 10), &q(4, 5)).unwrap(), q(1, 24));
    assert!(vol.eval(&path.tau).unwrap().is_zero());
    assert!(vol.integrate(&qi(0), &qi(1)).is_err());

    let path = zariski_path(&model("S427", "L1"), "L1").unwrap();
    assert_eq!(path.breakpoints(), vec![qi(0), q(4, 35), q(5, 7)]);

    let c = build_config_named("S527").unwrap();
    let (m, _) = c.flag("E").unwrap();
    let vol = volume_function(&zariski_path(m, "E").unwrap()).unwrap();
    assert_eq!(vol.eval(&qi(0)).unwrap(), qi(1));

    let zero = PiecewiseQuadratic::zero(qi(0), qi(1));
    assert!(zero.integrate(&qi(0), &qi(1)).unwrap().is_zero());
}

#[test]
fn restricted_profiles() {
    let m = model("S326", "E");
    let path = zariski_path(&m, "E").unwrap();
    let prof = restricted_profile(&path, &FlagPointSpec::generic("E")).unwrap();
    assert_eq!(prof.mode, PointMode::Exact);
    assert_eq!(prof.h.breakpoints, vec![qi(0), q(4, 15), q(3, 5)]);
    assert_eq!(prof.h.segments[0], [qi(0), qi(0), q(25, 8)]);
    // (6/5 - 2t)^2 / 2 = 18/25 - 12/5 t + 2 t^2.
    assert_eq!(prof.h.segments[1], [q(18, 25), q(-12, 5), qi(2)]);

    let c = build_config_named("S325").unwrap();
    let (m, points) = c.flag("E").unwrap();
    let path = zariski_path(m, "E").unwrap();
    let on_c = points.iter().find(|p| p.label == "E∩C").unwrap();
    let prof = restricted_profile(&path, on_c).unwrap();
    assert_eq!(prof.mode, PointMode::UpperBound);
    // 63/2 (14/15 - t)(t - 3/5) + 81/8 (14/15 - t)^2, expanded.
    let a = q(14, 15);
    let b = q(3, 5);
    let want = [
        q(63, 2) * &a * -&b + q(81, 8) * &a * &a,
        q(63, 2) * (&a + &b) - q(81, 4) * &a,
        q(-63, 2) + q(81, 8),
    ];
    assert_eq!(poly(&prof.h, &q(4, 5)), want);

    let other = FlagPointSpec::generic("L2");
    assert!(restricted_profile(&zariski_path(&model("S326", "E"), "E").unwrap(), &other).is_err());
}

#[test]
fn beta_values() {
    let c = build_config_named("S527").unwrap();
    let (m, _) = c.flag("E").unwrap();
    assert!(beta(m, "E").unwrap().is_zero());
    assert_eq!(beta(&model("S326", "E"), "E").unwrap(), q(14, 45));
}

#[test]
fn delta_reports() {
    let c = build_config(ConfigName::S326).unwrap();
    let (m, points) = c.flag("E").unwrap();
    let r = delta_report_for_path(&zariski_path(m, "E").unwrap(), &points).unwrap();
    let quotients: Vec<Rational> = r.points.iter().map(|p| p.quotient.clone()).collect();
    assert_eq!(quotients, vec![q(27, 11), q(135, 62), q(9, 2)]);
    assert_eq!(r.delta_lower_bound, q(27, 13));
    assert_eq!(r.verdict, Verdict::DeltaGt1);

    let c = build_config_named("S527").unwrap();
    let (m, points) = c.flag("E").unwrap();
    let r = delta_report_for_path(&zariski_path(m, "E").unwrap(), &points).unwrap();
    assert_eq!(r.delta_lower_bound, qi(1));
    assert_eq!(r.verdict, Verdict::DeltaEq1);
    assert_eq!(r.point("E∩C").unwrap().mode, PointMode::UpperBound);

    let path = zariski_path(m, "E").unwrap();
    let no_generic: Vec<_> = points.iter().filter(|p| !p.is_generic).cloned().collect();
    assert!(matches!(
        delta_report_for_path(&path, &no_generic),
        Err(Error::MissingGenericPoint(_))
    ));
}

#[test]
fn screens() {
    assert_eq!(
        liu_test(&volume_formula(4, 2, 5), 7),
        LiuVerdict::ExcludedUnstable
    );
    assert_eq!(volume_formula(4, 2, 5), q(15, 7));
    assert_eq!(volume_formula(5, 2, 7), qi(1));
    assert_eq!(liu_test(&qi(1), 9), LiuVerdict::Passes);
    assert_eq!(liu_test(&qi(9), 1), LiuVerdict::Passes);
    assert_eq!(alpha_delta_bounds(&q(3, 4), 2), (q(9, 8), q(9, 4)));
    assert_eq!(alpha_delta_bounds(&q(2, 3), 2), (qi(1), qi(2)));
    assert_eq!(alpha_delta_bounds(&qi(1), 3), (q(4, 3), qi(4)));
}

#[test]
fn catalog_tables() {
    assert_eq!(volume_formula(3, 2, 6), q(2, 5));
    assert_eq!(volume_formula(4, 2, 7), q(1, 7));
    for n in 2..=5 {
        for m in 2..=n {
            let built = build_config(ConfigName::Snm(n, m, 0)).unwrap().models[0]
                .1
                .degree()
                .unwrap();
            assert_eq!(built, volume_formula(n, m, 0));
        }
    }

    let c = build_config_named("Sn2_flagE(5)").unwrap();
    let (s2, _) = c.flag("E").unwrap();
    let k = s2
        .class_from_curves(&[("E", q(4, 3)), ("L", q(2, 3)), ("C", q(1, 3))])
        .unwrap();
    assert_eq!(k, s2.anticanonical());
    assert_eq!(s2.self_intersection("E").unwrap(), qi(-5));
    assert_eq!(s2.self_intersection("C").unwrap(), qi(-9));
    assert_eq!(s2.pair_curves("E", "C").unwrap(), qi(9));

    let c = build_config_named("Sn3_flagE(3)").unwrap();
    let (s, _) = c.flag("E").unwrap();
    assert_eq!(s.self_intersection("E").unwrap(), qi(-3));
    assert_eq!(s.self_intersection("L").unwrap(), qi(-3));
    assert_eq!(s.self_intersection("C").unwrap(), qi(-8));
    assert_eq!(s.pair_curves("E", "C").unwrap(), qi(8));

    assert!(matches!(
        build_config_named("S999"),
        Err(Error::UnknownConfig(_))
    ));
}

#[test]
fn classification_rows() {
    let row = classify(5, 2, 7).unwrap();
    assert_eq!(row.status, Status::StrictlyKSemistable);
    assert!(row
        .evidence
        .iter()
        .any(|e| matches!(e, EvidenceItem::FiniteAutomorphismAssumption { .. })));
    assert!(row.evidence.iter().any(|e| matches!(
        e,
        EvidenceItem::DeltaSingularPoint { report, .. } if report.verdict == Verdict::DeltaEq1
    )));
    assert_eq!(classify(3, 3, 5).unwrap().status, Status::KStable);
    let row = classify(2, 2, 3).unwrap();
    assert_eq!(row.status, Status::StrictlyKSemistable);
    assert!(row
        .evidence
        .iter()
        .all(|e| matches!(e, EvidenceItem::Literature { .. })));
    assert_eq!(classify(9, 9, 40).unwrap().status, Status::OutOfFamily);
    assert!(swapped_solution_set_up_to(30).is_empty());
}

#[test]
fn hilbert_series() {
    assert!(hilbert_series_check(&[1, 1, 1, 3], &[4], 50).equal);
    assert!(two_negative_check(3, 2, 50).equal);
    assert!(hilbert_series_check(&[1], &[1], 10).equal);
}
