use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::exteralg::{make_standard_symplectic, volume_form, PointwiseForm};
use crate::testforms::{random_trig_form, BatterySpec};

fn random_field(n: usize, grid: &Grid, degree: usize, seed: u64) -> FieldForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = BatterySpec {
        terms: 6,
        max_freq: 2,
        ..Default::default()
    };
    let f = random_trig_form(&mut rng, 2 * n, degree, &spec);
    FieldForm::from_trig(n, grid, &f).unwrap()
}

fn sin_x1(grid: &Grid, n: usize) -> FieldForm {
    FieldForm::from_fn(n, grid, 0, |x| vec![(2.0 * PI * x[0]).sin()]).unwrap()
}

#[test]
fn d_examples() {
    let g = Grid::uniform(2, 16).unwrap();
    let (w, _) = make_standard_symplectic(1).unwrap();
    let c = FieldForm::constant(&g, 2, &w).unwrap();
    assert!(
        FieldForm::constant(&g, 1, &PointwiseForm::basis(1, &[2]).unwrap())
            .unwrap()
            .d()
            .unwrap()
            .max_abs()
            < 1e-14
    );
    assert!(c.d().is_err());
    let df = sin_x1(&g, 1).d().unwrap();
    let expect =
        FieldForm::from_fn(1, &g, 1, |x| vec![2.0 * PI * (2.0 * PI * x[0]).cos(), 0.0]).unwrap();
    assert!(df.max_diff(&expect).unwrap() < 1e-12);
    for seed in 0..5 {
        let f = random_field(2, &Grid::uniform(4, 8).unwrap(), 1, seed);
        assert!(f.d().unwrap().d().unwrap().max_abs() < 1e-10);
    }
}

#[test]
fn nodal_spectral_round_trip() {
    let g = Grid::uniform(4, 8).unwrap();
    let f = random_field(2, &g, 2, 3);
    let back = f.to_spectral().to_nodal();
    assert!(back.max_diff(&f).unwrap() < 1e-10);
}

#[test]
fn dlambda_examples() {
    let g = Grid::uniform(4, 8).unwrap();
    let (w, _) = make_standard_symplectic(2).unwrap();
    let c = FieldForm::constant(&g, 2, &w).unwrap();
    assert!(c.dlambda().unwrap().max_abs() < 1e-14);
    let df = sin_x1(&g, 2).d().unwrap();
    assert!(df.dlambda().unwrap().max_abs() < 1e-12);
    for k in 1..=4 {
        let f = random_field(2, &g, k, 10 + k as u64);
        let dl = f.dlambda().unwrap();
        if k >= 2 {
            assert!(dl.dlambda().unwrap().max_abs() < 1e-9, "k = {k}");
        }
    }
}

#[test]
fn harmonic_examples() {
    let g = Grid::uniform(4, 8).unwrap();
    let (w, _) = make_standard_symplectic(2).unwrap();
    assert!(FieldForm::constant(&g, 2, &w)
        .unwrap()
        .is_harmonic(1e-10)
        .unwrap());
    // cos(2πx_1) dx_1 ∧ dx_2 is closed, and e^{13} is primitive.
    let f = FieldForm::from_fn(2, &g, 2, |x| {
        let mut v = vec![0.0; 6];
        v[1] = (2.0 * PI * x[0]).cos();
        v
    })
    .unwrap();
    assert!(f.primitive_mask(1e-12).unwrap().iter().all(|&p| p));
    assert!(f.is_harmonic(1e-10).unwrap());
    let nonclosed =
        FieldForm::from_fn(2, &g, 1, |x| vec![0.0, (2.0 * PI * x[0]).sin(), 0.0, 0.0]).unwrap();
    assert!(!nonclosed.is_harmonic(1e-6).unwrap());
}

#[test]
fn operator_commutators() {
    let g = Grid::uniform(6, 4).unwrap();
    for k in 1..=2 {
        let f = random_field(3, &g, k, 40 + k as u64);
        let dl = |x: &FieldForm| x.dlambda().unwrap();
        // [d, L] = 0
        let a = f.lefschetz_l().unwrap().d().unwrap();
        let b = f.d().unwrap().lefschetz_l().unwrap();
        assert!(a.max_diff(&b).unwrap() < 1e-9);
        // [d^Λ, L] = d
        let lhs = dl(&f.lefschetz_l().unwrap())
            .sub(&dl(&f).lefschetz_l().unwrap())
            .unwrap();
        assert!(lhs.max_diff(&f.d().unwrap()).unwrap() < 1e-8);
        // [dd^Λ, L] = 0
        let a = f.lefschetz_l().unwrap().ddlambda().unwrap();
        let b = f.ddlambda().unwrap().lefschetz_l().unwrap();
        assert!(a.max_diff(&b).unwrap() < 1e-8);
        // d d^Λ + d^Λ d = 0
        let s = f.ddlambda().unwrap().add(&dl(&f.d().unwrap())).unwrap();
        assert!(s.max_abs() < 1e-8);
    }
}

#[test]
fn smoothing() {
    let g = Grid::uniform(2, 32).unwrap();
    let m = Mollifier::bump(0.2).unwrap();
    assert!((m.total_integral(&g) - 1.0).abs() < 1e-10);
    assert_eq!(m.profile_value(0.2), 0.0);
    let w = PointwiseForm::basis(1, &[1, 2]).unwrap();
    let c = FieldForm::constant(&g, 2, &w).unwrap();
    assert!(m.smooth_field(&c).max_diff(&c).unwrap() < 1e-12);
    let f = random_field(1, &g, 0, 5);
    let a = m.smooth_field(&f.d().unwrap());
    let b = m.smooth_field(&f).d().unwrap();
    assert!(a.max_diff(&b).unwrap() < 1e-9);
}

#[test]
fn solve_d_examples() {
    let g = Grid::uniform(2, 16).unwrap();
    let z = FieldForm::zeros(1, &g, 1).unwrap();
    assert_eq!(solve_d(&z, 1e-10).unwrap().max_abs(), 0.0);
    let rhs =
        FieldForm::from_fn(1, &g, 1, |x| vec![2.0 * PI * (2.0 * PI * x[0]).cos(), 0.0]).unwrap();
    let sol = solve_d(&rhs, 1e-10).unwrap();
    assert!(sol.max_diff(&sin_x1(&g, 1)).unwrap() < 1e-12);
    let g4 = Grid::uniform(4, 8).unwrap();
    for k in 0..3 {
        let g0 = random_field(2, &g4, k, 60 + k as u64);
        let rhs = g0.d().unwrap();
        let sol = solve_d(&rhs, 1e-9).unwrap();
        assert!(sol.d().unwrap().max_diff(&rhs).unwrap() < 1e-8);
    }
    let c = FieldForm::constant(&g, 1, &PointwiseForm::basis(1, &[1]).unwrap()).unwrap();
    assert!(matches!(solve_d(&c, 1e-10), Err(Error::NotExact(_))));
    assert!(matches!(
        solve_d(
            &sin_x1(&g, 1)
                .d()
                .unwrap()
                .scale(0.0)
                .add(&FieldForm::from_fn(1, &g, 1, |x| vec![0.0, (2.0 * PI * x[0]).sin()]).unwrap())
                .unwrap(),
            1e-10
        ),
        Err(Error::Domain(_))
    ));
}

#[test]
fn integration_and_lifts() {
    for n in 1..=2 {
        let g = Grid::uniform(2 * n, 4).unwrap();
        let v = FieldForm::constant(&g, 2 * n, &volume_form(n).unwrap()).unwrap();
        assert!((v.integrate().unwrap() - 1.0).abs() < 1e-14);
        let (w, _) = make_standard_symplectic(n).unwrap();
        let lw = FieldForm::constant(&g, 2, &w).unwrap().dual_lefschetz();
        assert!(lw
            .to_nodal()
            .nodal()
            .iter()
            .all(|x| (x - n as f64).abs() < 1e-14));
    }
    let g = Grid::uniform(4, 4).unwrap();
    let f = random_field(2, &g, 2, 99);
    for op in [
        PointwiseOp::L,
        PointwiseOp::Lambda,
        PointwiseOp::H,
        PointwiseOp::Star,
    ] {
        let Lifted::Field(out) = lift_pointwise(op, &f).unwrap() else {
            panic!()
        };
        for idx in [0, 17, 200] {
            let r = pointwise_reference(op, &f, idx).unwrap();
            assert!((&out.value_at_node(idx) - &r).norm() < 1e-12);
        }
    }
}

#[test]
fn dealiased_wedge_matches_pointwise_product() {
    let g = Grid::uniform(2, 16).unwrap();
    let a = random_field(1, &g, 1, 7);
    let b = random_field(1, &g, 1, 8);
    let ab = a.wedge(&b).unwrap();
    // Both inputs have modes |m| <= 2, so the product is resolved on 16 nodes.
    let direct = FieldForm::from_fn(1, &g, 2, |_| vec![0.0]).unwrap();
    let (an, bn) = (a.nodal(), b.nodal());
    let nodes = g.nodes();
    let mut v = direct.nodal().into_owned();
    for i in 0..nodes {
        v[i] = an[i] * bn[nodes + i] - an[nodes + i] * bn[i];
    }
    let direct = FieldForm::from_nodal(1, &g, 2, v).unwrap();
    assert!(ab.max_diff(&direct).unwrap() < 1e-12);
}

#[test]
fn sff_round_trip() {
    let g = Grid::uniform(2, 8).unwrap();
    let f = random_field(1, &g, 1, 11);
    for f in [f.clone(), f.to_spectral()] {
        let mut buf = Vec::new();
        f.write_sff(&mut buf).unwrap();
        let back = FieldForm::read_sff(buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }
}

mod currents {
    use super::*;
    use crate::chains::{CurrentRep, PolyChain, Simplex, TestForm};
    use crate::testforms::battery;

    fn random_chain(nn: usize, p: usize, pieces: usize, seed: u64) -> PolyChain {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = PolyChain::new(nn, p);
        for _ in 0..pieces {
            let v0: Vec<f64> = (0..nn).map(|_| rng.random_range(0.3..0.7)).collect();
            let verts = (0..=p)
                .map(|i| {
                    if i == 0 {
                        v0.clone()
                    } else {
                        v0.iter()
                            .map(|x| x + rng.random_range(-0.15..0.15))
                            .collect()
                    }
                })
                .collect();
            c.push(rng.random_range(-1.0..1.0), Simplex::new(verts).unwrap())
                .unwrap();
        }
        c
    }

    #[test]
    fn smoothed_circle_pairs_to_one() {
        let grid = Grid::uniform(2, 16).unwrap();
        let seg = Simplex::new(vec![vec![0.0, 0.4], vec![1.0, 0.4]]).unwrap();
        let t = CurrentRep::chain(PolyChain::simplex(seg));
        let m = Mollifier::bump(0.2).unwrap();
        let f = m.smooth_current(&t, &grid, None).unwrap();
        assert_eq!(f.degree(), 1);
        let dx = PointwiseForm::basis(1, &[1]).unwrap();
        let v = CurrentRep::field(f.clone())
            .evaluate(&TestForm::Constant(dx))
            .unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
        // The mass concentrates near y = 0.4.
        let idx_near = grid.linear_index(&[3, 6]);
        let idx_far = grid.linear_index(&[3, 14]);
        let dy_part = &f.nodal()[f.nodes()..];
        assert!(dy_part[idx_near].abs() > 10.0 * dy_part[idx_far].abs());
    }

    #[test]
    fn smoothing_commutes_with_evaluation() {
        let grid = Grid::uniform(4, 8).unwrap();
        let m = Mollifier::bump(0.3).unwrap();
        for p in [1, 2] {
            let c = random_chain(4, p, 3, 40 + p as u64);
            let t = CurrentRep::chain(c.clone());
            let f = m.smooth_current(&t, &grid, None).unwrap();
            let spec = BatterySpec {
                count: 10,
                max_freq: 2,
                ..Default::default()
            };
            for phi in battery(4, p, &spec) {
                let lhs = CurrentRep::field(f.clone())
                    .evaluate(&TestForm::Trig(phi.clone()))
                    .unwrap();
                let mollified = phi.multiply_symbol(|fr| {
                    let mi: Vec<i64> = fr.iter().map(|x| x.round() as i64).collect();
                    m.symbol_at(&grid, &mi)
                });
                let rhs = t.evaluate(&TestForm::Trig(mollified)).unwrap();
                assert!((lhs - rhs).abs() < 1e-8, "p={p}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn boundary_matches_exterior_derivative() {
        let grid = Grid::uniform(4, 8).unwrap();
        let c = random_chain(4, 2, 4, 9);
        let beta = chain_to_spectral(&c, &grid).unwrap();
        let beta_b = chain_to_spectral(&c.boundary(), &grid).unwrap();
        let k = beta.degree();
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let db = beta.d().unwrap().scale(sign);
        assert!(db.max_diff(&beta_b).unwrap() < 1e-9 * (1.0 + beta_b.max_abs()));
    }

    #[test]
    fn wedge_with_constant_form() {
        let grid = Grid::uniform(4, 8).unwrap();
        let c = random_chain(4, 2, 2, 5);
        let (omega, _) = make_standard_symplectic(2).unwrap();
        let m = Mollifier::bump(0.3).unwrap();
        let t = CurrentRep::wedge_constant(omega.clone(), c.clone());
        let f = m.smooth_current(&t, &grid, None).unwrap();
        let g = m
            .smooth_current(&CurrentRep::chain(c), &grid, None)
            .unwrap();
        // As forms, ω ∧ [c] corresponds to ω ∧ β.
        let expect = g.wedge_const(&omega).unwrap();
        assert!(f.max_diff(&expect).unwrap() < 1e-10 * (1.0 + expect.max_abs()));
    }

    #[test]
    fn support_violation() {
        let grid = Grid::uniform(2, 8).unwrap();
        let seg = Simplex::new(vec![vec![0.4, 0.5], vec![0.6, 0.5]]).unwrap();
        let t = CurrentRep::chain(PolyChain::simplex(seg));
        let region = TorusBox {
            lo: vec![0.2, 0.2],
            hi: vec![0.8, 0.8],
        };
        assert!(Mollifier::bump(0.1)
            .unwrap()
            .smooth_current(&t, &grid, Some(&region))
            .is_ok());
        let e = Mollifier::bump(0.25)
            .unwrap()
            .smooth_current(&t, &grid, Some(&region));
        assert!(matches!(e, Err(Error::SupportViolation(_))));
    }

    #[test]
    fn pairing_exact_forms_with_cycles() {
        let grid = Grid::uniform(2, 16).unwrap();
        let g = random_field(1, &grid, 0, 3);
        let m = Mollifier::bump(0.2).unwrap();
        let df = m.smooth_field(&g.d().unwrap());
        let a = Simplex::new(vec![vec![0.1, 0.2], vec![0.7, 0.9]]).unwrap();
        let loop_c = PolyChain::from_terms(
            2,
            1,
            vec![
                (1.0, a),
                (
                    1.0,
                    Simplex::new(vec![vec![0.7, 0.9], vec![0.3, 0.6]]).unwrap(),
                ),
                (
                    1.0,
                    Simplex::new(vec![vec![0.3, 0.6], vec![0.1, 0.2]]).unwrap(),
                ),
            ],
        )
        .unwrap();
        assert!(loop_c.boundary().is_empty());
        assert!(pair_with_cycle(&df, &loop_c).unwrap().abs() < 1e-8);
        let dy = FieldForm::constant(&grid, 1, &PointwiseForm::basis(1, &[2]).unwrap()).unwrap();
        let circle =
            PolyChain::simplex(Simplex::new(vec![vec![0.3, 0.0], vec![0.3, 1.0]]).unwrap());
        assert!((pair_with_cycle(&dy, &circle).unwrap() - 1.0).abs() < 1e-14);
    }
}
