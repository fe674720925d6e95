use super::*;
use crate::chains::Simplex;
use crate::testforms::TrigForm;

fn seg(a: &[f64], b: &[f64]) -> Simplex {
    Simplex::new(vec![a.to_vec(), b.to_vec()]).unwrap()
}

fn chain(dim: usize, n: usize, simplices: Vec<Vec<Vec<f64>>>) -> PolyChain {
    PolyChain::from_terms(
        n,
        dim,
        simplices
            .into_iter()
            .map(|v| (1.0, Simplex::new(v).unwrap()))
            .collect(),
    )
    .unwrap()
}

fn affine_one_forms() -> Vec<TrigForm> {
    use crate::exteralg::PointwiseForm;
    // dx, dy and x dy, y dx through their Fourier expansions at small frequency.
    let mut out = Vec::new();
    for i in [1usize, 2] {
        let f = PointwiseForm::from_terms(1, [(&[i][..], 1.0)]).unwrap();
        out.push(TrigForm::constant(&f).unwrap());
    }
    out
}

#[test]
fn grid_aligned_chain_is_fixed() {
    let g = GridSpec::new(2, 0.5).unwrap();
    let t = PolyChain::from_terms(
        2,
        1,
        vec![
            (1.0, seg(&[0.0, 0.0], &[0.5, 0.0])),
            (1.0, seg(&[0.5, 0.0], &[0.5, 0.5])),
        ],
    )
    .unwrap();
    let res = deform(&t, &g).unwrap();
    assert!(res.r.is_empty());
    assert!(res.s.is_empty());
    assert_eq!(res.retries, 0);
    assert_eq!(res.p.canonicalize(), t.canonicalize());
    let c = &res.certificate;
    assert_eq!(c.p_support.max_distance, 0.0);
    assert_eq!(c.skeletal_defect, 0.0);
    verify_certificate(&t, &g, &res).unwrap();
}

#[test]
fn diagonal_segment_becomes_a_staircase() {
    // The zero offset puts the cell center on the diagonal; deform resamples.
    let g = GridSpec::new(2, 1.0).unwrap().with_seed(3);
    let t = PolyChain::simplex(seg(&[0.0, 0.0], &[1.0, 1.0]));
    let res = deform(&t, &g).unwrap();
    assert!(res.retries >= 1);
    for (_, s) in res.p.terms() {
        let v = s.vertices();
        assert!(
            v[0][0] == v[1][0] || v[0][1] == v[1][1],
            "P has a non-axis edge {v:?}"
        );
    }
    // ∂P = h(∂T): two endpoints of opposite sign.
    let bp = res.p.boundary();
    assert_eq!(bp.len(), 2);
    let total: f64 = bp.terms().iter().map(|t| t.0).sum();
    assert!(total.abs() < 1e-12);
    for phi in affine_one_forms() {
        let (res_t, _) = identity_residual(&t, &res.p, &res.r, &res.s, &[phi]).unwrap();
        assert!(res_t < 1e-12);
    }
    let c = verify_certificate(&t, &g, &res).unwrap();
    assert!(
        c.p_support.max_distance <= 4.0
            && c.r_support.max_distance <= 4.0
            && c.s_support.max_distance <= 4.0
    );
    assert!(c.identity_residual < 1e-12);
}

#[test]
fn closed_loop_has_no_s_and_closed_p() {
    let g = GridSpec::seeded(2, 0.3, 11).unwrap();
    let sq = [[0.1, 0.2], [1.05, 0.3], [0.95, 1.1], [0.15, 0.9]];
    let mut t = PolyChain::new(2, 1);
    for i in 0..4 {
        t.push(1.0, seg(&sq[i], &sq[(i + 1) % 4])).unwrap();
    }
    let res = deform(&t, &g).unwrap();
    assert!(res.s.is_empty());
    assert!(res.p.boundary().is_empty());
    // Every piece of P is a whole grid edge.
    for (_, s) in res.p.terms() {
        assert!((s.volume() - 0.3).abs() < 1e-12);
    }
    let c = verify_certificate(&t, &g, &res).unwrap();
    assert!(c.identity_residual < 1e-10);
}

#[test]
fn triangles_in_four_dimensions() {
    let g = GridSpec::seeded(4, 0.4, 5).unwrap();
    let t = chain(
        2,
        4,
        vec![
            vec![
                vec![0.1, 0.2, 0.3, 0.05],
                vec![0.9, 0.4, 0.1, 0.6],
                vec![0.3, 1.0, 0.7, 0.2],
            ],
            vec![
                vec![0.9, 0.4, 0.1, 0.6],
                vec![1.2, 0.9, 0.5, 0.1],
                vec![0.3, 1.0, 0.7, 0.2],
            ],
        ],
    );
    let res = deform(&t, &g).unwrap();
    let c = verify_certificate(&t, &g, &res).unwrap();
    assert!(c.skeletal_defect <= SKELETAL_TOL);
    assert!(!res.s.is_empty());
}

#[test]
fn points_move_to_vertices() {
    let g = GridSpec::seeded(3, 0.5, 2).unwrap();
    let t = PolyChain::from_terms(
        3,
        0,
        vec![
            (2.0, Simplex::new(vec![vec![0.2, 0.3, 0.4]]).unwrap()),
            (-1.0, Simplex::new(vec![vec![1.1, 0.1, -0.4]]).unwrap()),
        ],
    )
    .unwrap();
    let res = deform(&t, &g).unwrap();
    assert!(res.s.is_empty());
    assert_eq!(res.r.dim(), 1);
    verify_certificate(&t, &g, &res).unwrap();
    assert!(res.p.len() <= 2);
}

#[test]
fn periodic_mode_wraps_into_the_fundamental_domain() {
    let g = GridSpec::seeded(2, 0.25, 9)
        .unwrap()
        .with_period(vec![1.0, 1.0])
        .unwrap();
    // A closed curve winding once in x, drawn across the seam.
    let pts = [[0.6, 0.3], [1.1, 0.45], [1.6, 0.3]];
    let mut t = PolyChain::new(2, 1);
    t.push(1.0, seg(&pts[0], &pts[1])).unwrap();
    t.push(1.0, seg(&pts[1], &pts[2])).unwrap();
    let res = deform(&t, &g).unwrap();
    for (_, s) in res.p.terms().iter().chain(res.r.terms()) {
        for v in s.vertices() {
            assert!(
                v.iter()
                    .all(|&x| (-1e-12..=1.0 + 0.25 + 1e-12).contains(&x)),
                "{v:?}"
            );
        }
    }
    verify_certificate(&t, &g, &res).unwrap();
}

#[test]
fn domain_errors() {
    let g = GridSpec::new(2, 0.5).unwrap();
    let t = chain(
        2,
        2,
        vec![vec![vec![0.1, 0.1], vec![0.9, 0.2], vec![0.3, 0.8]]],
    );
    assert!(matches!(deform(&t, &g), Err(Error::Domain(_))));
    assert!(GridSpec::new(2, 0.5)
        .unwrap()
        .with_offset(vec![0.5, 0.0])
        .is_err());
    assert!(GridSpec::new(2, -1.0).is_err());
}

#[test]
fn stokes_cross_check_on_r() {
    let g = GridSpec::seeded(3, 0.35, 4).unwrap();
    let t = PolyChain::simplex(seg(&[0.1, 0.2, 0.3], &[1.0, 0.7, 0.05]));
    let res = deform(&t, &g).unwrap();
    let spec = crate::testforms::BatterySpec {
        periodic: false,
        ..Default::default()
    };
    for phi in crate::testforms::battery(3, 1, &spec).iter().take(10) {
        let a = res.r.boundary().evaluate_trig(phi).unwrap();
        let b = res.r.evaluate_trig(&phi.d()).unwrap();
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
}
