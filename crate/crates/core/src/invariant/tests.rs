use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exteralg::blade::binomial;
use crate::exteralg::wedge;

#[test]
fn abelian_differential_vanishes() {
    let m = abelian(2).unwrap();
    for k in 0..=4 {
        assert!(m.d(k).iter().all(|x| *x == 0.0));
    }
    assert_eq!(cohomology(&m).betti, vec![1, 4, 6, 4, 1]);
}

#[test]
fn kodaira_thurston_betti() {
    let m = kodaira_thurston().unwrap();
    let coh = cohomology(&m);
    assert_eq!(coh.betti[1], 3);
    assert_eq!(coh.betti, vec![1, 3, 4, 3, 1]);
    assert_eq!(betti_exact(&m), coh.betti);
}

#[test]
fn rank_nullity_and_poincare_duality() {
    for name in LIBRARY_NAMES {
        let m = library(name).unwrap();
        let dim = m.dim();
        let coh = cohomology(&m);
        for k in 0..=dim {
            let rk = crate::linalg::rank(m.d(k));
            let rk_prev = if k > 0 {
                crate::linalg::rank(m.d(k - 1))
            } else {
                0
            };
            assert_eq!(
                rk + rk_prev + coh.betti[k],
                binomial(dim, k),
                "{name} k={k}"
            );
            assert_eq!(coh.betti[k], coh.betti[dim - k]);
        }
        // Poincaré pairing of harmonic representatives is nondegenerate.
        let alg = m.algebra();
        for k in 0..=dim {
            let a = &coh.representatives[k].basis;
            let b = &coh.representatives[dim - k].basis;
            let pm = nalgebra::DMatrix::from_fn(a.ncols(), b.ncols(), |i, j| {
                let x = alg.from_dense(k, a.column(i).as_slice());
                let y = alg.from_dense(dim - k, b.column(j).as_slice());
                wedge(&x, &y).unwrap().terms().map(|(_, c)| c).sum::<f64>()
            });
            assert!(pm.determinant().abs() > 1e-8, "{name} k={k}");
        }
    }
}

#[test]
fn hard_lefschetz() {
    assert!(hard_lefschetz_test(&abelian(2).unwrap())
        .unwrap()
        .iter()
        .all(|&b| b));
    assert!(hard_lefschetz_test(&abelian(3).unwrap())
        .unwrap()
        .iter()
        .all(|&b| b));
    let kt = hard_lefschetz_test(&kodaira_thurston().unwrap()).unwrap();
    assert!(kt[0]);
    assert!(!kt[1]);
    for name in LIBRARY_NAMES {
        assert!(hard_lefschetz_test(&library(name).unwrap()).unwrap()[0]);
    }
}

#[test]
fn primitive_cohomology_of_torus() {
    let m = abelian(2).unwrap();
    assert_eq!(ph(&m, 0).unwrap().dim(), 1);
    assert_eq!(ph(&m, 1).unwrap().dim(), 4);
    assert_eq!(ph(&m, 2).unwrap().dim(), 5);
    assert!(ph(&m, 3).is_err());
    for (r, expect) in [(1, 4), (2, 5)] {
        let (s, preserves) = ph_d(&m, r).unwrap();
        assert_eq!(s.dim(), expect);
        assert!(preserves);
        assert_eq!(natural_map_rank(&m, r).unwrap(), expect);
    }
    assert!(ph_d(&m, 0).is_err());
}

#[test]
fn hard_lefschetz_models_satisfy_isomorphisms() {
    for name in LIBRARY_NAMES {
        let m = library(name).unwrap();
        let rep = report(&m).unwrap();
        assert_eq!(rep.betti, rep.betti_exact, "{name}");
        for row in &rep.primitive {
            assert!(row.ph <= rep.betti[row.r]);
            assert!(row.natural_map_rank <= row.ph.min(row.ph_d));
        }
        if rep.hard_lefschetz() {
            for row in &rep.primitive {
                assert_eq!(row.ph, row.ph_d, "{name} r={}", row.r);
                assert_eq!(row.natural_map_rank, row.ph, "{name} r={}", row.r);
            }
            for row in &rep.ddlambda {
                assert_eq!(row.ker_d_cap_im_dlambda, row.im_ddlambda, "{name}");
                assert_eq!(row.im_d_cap_ker_dlambda, row.im_ddlambda, "{name}");
            }
        }
    }
}

#[test]
fn abelian_ddlambda_vanishes() {
    let rep = report(&abelian(2).unwrap()).unwrap();
    assert!(rep
        .ddlambda
        .iter()
        .all(|r| r.im_ddlambda == 0 && r.ker_d_cap_im_dlambda == 0 && r.im_d_cap_ker_dlambda == 0));
}

#[test]
fn kodaira_thurston_regression() {
    let rep = report(&kodaira_thurston().unwrap()).unwrap();
    assert_eq!(rep.hl_iso, vec![true, false, true]);
    let ph: Vec<usize> = rep.primitive.iter().map(|r| r.ph).collect();
    let phd: Vec<usize> = rep.primitive.iter().map(|r| r.ph_d).collect();
    let nat: Vec<usize> = rep.primitive.iter().map(|r| r.natural_map_rank).collect();
    let dd: Vec<[usize; 3]> = rep
        .ddlambda
        .iter()
        .map(|r| {
            [
                r.ker_d_cap_im_dlambda,
                r.im_d_cap_ker_dlambda,
                r.im_ddlambda,
            ]
        })
        .collect();
    assert_eq!(rep.ph_dims, vec![1, 3, 3]);
    assert_eq!(ph, vec![3, 3]);
    assert_eq!(phd, vec![3, 3]);
    assert_eq!(nat, vec![3, 3]);
    assert_eq!(
        dd,
        vec![[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0], [0, 0, 0]]
    );
}

#[test]
fn dlambda_squares_to_zero_and_commutes() {
    for name in LIBRARY_NAMES {
        let m = library(name).unwrap();
        for k in 2..=m.dim() {
            let a = dlambda_matrix(&m, k - 1).unwrap() * dlambda_matrix(&m, k).unwrap();
            assert!(a.abs().max() < 1e-12);
        }
        // dd^Λ + d^Λ d = 0.
        for k in 1..m.dim() {
            let a = m.d(k - 1) * dlambda_matrix(&m, k).unwrap()
                + dlambda_matrix(&m, k + 1).unwrap() * m.d(k);
            assert!(a.abs().max() < 1e-12);
        }
    }
}

#[test]
fn ddlambda_refinement() {
    let m = library("nil6").unwrap();
    let alg = m.algebra();
    let zero = primitive_ddlambda_refine(&m, &crate::PointwiseForm::zero(3), None, 1e-10).unwrap();
    assert!(zero.beta.is_zero());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nontrivial = 0;
    for k in 1..=3 {
        let prim = alg.primitive_basis(k);
        for _ in 0..5 {
            let x: Vec<f64> = (0..prim.ncols())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let g = prim * nalgebra::DVector::from_vec(x);
            let alpha_v = ddlambda_matrix(&m, k).unwrap() * &g;
            let alpha = alg.from_dense(k, alpha_v.as_slice());
            let out = primitive_ddlambda_refine(&m, &alpha, None, 1e-9).unwrap();
            assert!(crate::exteralg::is_primitive(&out.beta, 1e-10).unwrap());
            assert!(out.residual < 1e-9);
            if alpha_v.abs().max() > 1e-6 {
                nontrivial += 1;
            }
        }
    }
    assert!(nontrivial > 0);
    // A primitive α outside im dd^Λ is rejected.
    let torus = abelian(2).unwrap();
    let e13 = crate::PointwiseForm::basis(2, &[1, 3]).unwrap();
    assert!(matches!(
        primitive_ddlambda_refine(&torus, &e13, None, 1e-9),
        Err(crate::Error::Domain(_))
    ));
}

#[test]
fn harmonic_classes_killed_by_lefschetz_have_no_constant_component() {
    for name in LIBRARY_NAMES {
        let m = library(name).unwrap();
        for k in 0..=m.dim() {
            let (_, worst) = alpha0_check(&m, k).unwrap();
            assert!(worst < 1e-10, "{name} k={k}: {worst}");
        }
    }
}

#[test]
fn refining_a_primitive_gamma_returns_it() {
    let m = nil6().unwrap();
    let alg = m.algebra();
    let prim = alg.primitive_basis(3);
    let dd = ddlambda_matrix(&m, 3).unwrap();
    let col = (0..prim.ncols())
        .find(|&c| (&dd * prim.column(c)).abs().max() > 1e-6)
        .unwrap();
    let g = alg.from_dense(3, prim.column(col).as_slice());
    let alpha_v = &dd * alg.to_dense(&g, 3);
    let alpha = alg.from_dense(3, alpha_v.as_slice());
    let out = primitive_ddlambda_refine(&m, &alpha, Some(&g), 1e-10).unwrap();
    assert!((out.beta - g).norm() < 1e-12);
}
