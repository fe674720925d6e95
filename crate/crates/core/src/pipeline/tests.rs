use super::*;

#[test]
fn circle_in_t2_short_circuits() {
    let cfg = preset("t2_circle").unwrap();
    let mut out = run_full(&cfg).unwrap();
    let r = out.report.clone();
    assert!(matches!(r.branch, Branch::ShortCircuit { .. }));
    assert!(r.passed, "{:?}", r.failure());
    assert!(r.empty_ball.as_ref().unwrap().radius_cells >= 1);
    let pair = r.class_pairings.iter().find(|c| c.form == [1]).unwrap();
    assert!((pair.q - 1.0).abs() < 1e-12 && (pair.t - 1.0).abs() < 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let paths = out.write_artifacts(dir.path()).unwrap();
    assert_eq!(paths.len(), 2);
    let back = FieldForm::read_sff(std::fs::File::open(&paths[0]).unwrap()).unwrap();
    assert_eq!(back.max_diff(&out.final_form).unwrap(), 0.0);
    assert_eq!(out.report.artifacts.len(), 2);
}

#[test]
fn bumped_torus_on_a_coarse_grid() {
    let mut cfg = preset("t4_bumped").unwrap();
    cfg.resolution = 16;
    cfg.battery_size = 12;
    let out = run_full(&cfg).unwrap();
    let r = &out.report;
    assert!(matches!(r.branch, Branch::FullPath { .. }));
    assert!(r.steps.iter().all(|s| s.passed), "{:?}", r.steps);
    assert!(r
        .steps
        .iter()
        .any(|s| s.route == "battery" && s.name.starts_with("dΓ")));
    assert!(r
        .class_pairings
        .iter()
        .all(|c| (c.q - c.t).abs() <= r.class_tol));
    assert!(r.harmonic.passed);
    r.certificate.as_ref().unwrap().check().unwrap();
    assert!(r.masses.p > 0.0 && r.masses.gamma_h > 0.0);
    let b = out.b.as_ref().unwrap();
    assert_eq!(b.degree(), 1);
    assert!(b.sup_norm() > 0.0);
}

#[test]
fn config_round_trips_through_json() {
    for name in PRESET_NAMES {
        let cfg = preset(name).unwrap();
        let s = serde_json::to_string(&cfg).unwrap();
        assert!(s.contains("\"Q\""));
        let back = PipelineConfig::from_json(s.as_bytes()).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        back.validate().unwrap();
    }
    assert!(preset("t3").is_err());
}

#[test]
fn symplectic_torus_is_not_primitive() {
    let mut cfg = preset("t4_lagrangian").unwrap();
    cfg.resolution = 8;
    cfg.q = PolyChain::coordinate_box(&[0.0, 0.0, 0.25, 0.5], &[(0, 1.0), (1, 1.0)]).unwrap();
    assert!(matches!(run(&cfg), Err(Error::Precondition(_))));
}

#[test]
fn bumped_torus_needs_a_filling() {
    let mut cfg = preset("t4_bumped").unwrap();
    cfg.resolution = 8;
    cfg.filling = None;
    match run(&cfg) {
        Err(Error::Precondition(m)) => assert!(m.contains("filling")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn open_chains_are_rejected() {
    let mut cfg = preset("t2_circle").unwrap();
    cfg.q = PolyChain::coordinate_box(&[0.0, 0.3], &[(0, 0.5)]).unwrap();
    assert!(matches!(cfg.validate(), Err(Error::Precondition(_))));
    let mut cfg = preset("t2_circle").unwrap();
    cfg.p = 2;
    assert!(cfg.validate().is_err());
    let mut cfg = preset("t2_circle").unwrap();
    cfg.resolution = 6;
    assert!(cfg.validate().is_err());
}
