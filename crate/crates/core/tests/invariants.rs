use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symharm::chains::{random_chain, CurrentRep, TestForm};
use symharm::currents::DualCurrent;
use symharm::exteralg::{
    counting_h, dual_lefschetz, is_primitive, lefschetz_decompose, lefschetz_l,
    lefschetz_reconstruct, make_standard_symplectic, pairing, star, volume_form, wedge, Algebra,
    PointwiseForm,
};
use symharm::selftest::random_mixed_form;
use symharm::testforms::{random_trig_form, BatterySpec, TrigForm};
use symharm::torusfields::{FieldForm, Grid};

fn homogeneous(rng: &mut ChaCha8Rng, n: usize, k: usize) -> PointwiseForm {
    let size = Algebra::get(n).unwrap().size(k);
    let v: Vec<f64> = (0..size).map(|_| rng.random_range(-1.0..1.0)).collect();
    PointwiseForm::from_dense(n, k, &v)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sl2_relations_hold_pointwise(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mixed_form(&mut rng, n).unwrap();
        let comm = &dual_lefschetz(&lefschetz_l(&a).unwrap()).unwrap() - &lefschetz_l(&dual_lefschetz(&a).unwrap()).unwrap();
        let h = counting_h(&a).unwrap();
        prop_assert!((&comm - &h).max_abs() <= 1e-10 * (1.0 + h.max_abs()));
    }

    #[test]
    fn star_is_an_involution_dual_to_the_pairing(seed in any::<u64>(), n in 1usize..4, k in 0usize..7) {
        let k = k % (2 * n + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = homogeneous(&mut rng, n, k);
        let b = homogeneous(&mut rng, n, k);
        let sa = star(&a).unwrap();
        prop_assert!((&star(&sa).unwrap() - &a).max_abs() <= 1e-10);
        // ⋆a ∧ b = (a, b) vol
        let top = wedge(&sa, &b).unwrap();
        let vol = volume_form(n).unwrap();
        let lhs = top.get(&(1..=2 * n).collect::<Vec<_>>());
        let rhs = pairing(&a, &b).unwrap() * vol.get(&(1..=2 * n).collect::<Vec<_>>());
        prop_assert!(close(lhs, rhs, 1e-10), "{lhs} vs {rhs}");
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), n in 1usize..4, j in 0usize..4, k in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (j, k) = (j.min(2 * n), k.min(2 * n));
        let a = homogeneous(&mut rng, n, j);
        let b = homogeneous(&mut rng, n, k);
        let sign = if (j * k) % 2 == 0 { 1.0 } else { -1.0 };
        let ab = wedge(&a, &b).unwrap();
        let ba = wedge(&b, &a).unwrap().scale(sign);
        prop_assert!((&ab - &ba).max_abs() <= 1e-12);
    }

    #[test]
    fn lefschetz_components_are_primitive_and_reconstruct(seed in any::<u64>(), n in 1usize..4, k in 0usize..7) {
        let k = k % (2 * n + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = homogeneous(&mut rng, n, k);
        let comps = lefschetz_decompose(&a).unwrap();
        for c in &comps {
            prop_assert!(is_primitive(&c.beta, 1e-9).unwrap(), "r = {}", c.r);
        }
        let back = lefschetz_reconstruct(n, &comps).unwrap();
        prop_assert!((&back - &a).max_abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boundary_of_boundary_vanishes(seed in any::<u64>(), ambient in 2usize..5, p in 2usize..4) {
        let p = p.min(ambient);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain(&mut rng, ambient, p, 3, 1.0, 0.5);
        prop_assert!(c.boundary().boundary().canonicalize().mass() <= 1e-12);
    }

    #[test]
    fn stokes_on_random_chains(seed in any::<u64>(), ambient in 2usize..5, p in 1usize..4) {
        let p = p.min(ambient);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain(&mut rng, ambient, p, 3, 1.0, 0.5);
        let spec = BatterySpec { terms: 3, periodic: false, ..Default::default() };
        let phi = random_trig_form(&mut rng, ambient, p - 1, &spec);
        let a = c.boundary().evaluate_trig(&phi).unwrap();
        let b = c.evaluate_trig(&phi.d()).unwrap();
        prop_assert!(close(a, b, 1e-9), "{a} vs {b}");
    }

    #[test]
    fn mass_is_absolutely_homogeneous(seed in any::<u64>(), s in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain(&mut rng, 3, 2, 3, 1.0, 0.5);
        prop_assert!(close(c.scale(s).mass(), s.abs() * c.mass(), 1e-12));
    }
}

fn periodic_form(rng: &mut ChaCha8Rng, n: usize, k: usize) -> TrigForm {
    let spec = BatterySpec {
        terms: 3,
        max_freq: 2,
        periodic: true,
        ..Default::default()
    };
    random_trig_form(rng, 2 * n, k, &spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectral_d_matches_the_analytic_derivative(seed in any::<u64>(), n in 1usize..3, k in 0usize..4) {
        let k = k.min(2 * n - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = Grid::uniform(2 * n, 8).unwrap();
        let phi = periodic_form(&mut rng, n, k);
        let f = FieldForm::from_trig(n, &grid, &phi).unwrap();
        let exact = FieldForm::from_trig(n, &grid, &phi.d()).unwrap();
        let df = f.d().unwrap();
        prop_assert!(df.max_diff(&exact).unwrap() <= 1e-9 * (1.0 + exact.sup_norm()));
        if k + 2 <= 2 * n {
            prop_assert!(df.d().unwrap().sup_norm() <= 1e-9 * (1.0 + df.sup_norm()));
        }
    }

    #[test]
    fn field_commutators(seed in any::<u64>(), k in 1usize..3) {
        let n = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = Grid::uniform(4, 8).unwrap();
        let f = FieldForm::from_trig(n, &grid, &periodic_form(&mut rng, n, k)).unwrap().to_spectral();
        // [Λ, L] = H on fields
        let mut comm = f.lefschetz_l().unwrap().dual_lefschetz();
        if k >= 2 {
            comm = comm.sub(&f.dual_lefschetz().lefschetz_l().unwrap()).unwrap();
        }
        prop_assert!(comm.max_diff(&f.counting_h()).unwrap() <= 1e-9 * (1.0 + f.sup_norm()));
        // d d^Λ = -d^Λ d
        if k + 1 < 2 * n {
            let a = f.ddlambda().unwrap();
            let b = f.d().unwrap().dlambda().unwrap();
            prop_assert!(a.add(&b).unwrap().sup_norm() <= 1e-9 * (1.0 + a.sup_norm()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn currents_act_by_duality(seed in any::<u64>(), n in 1usize..3, p in 2usize..5) {
        let p = p.min(2 * n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_chain(&mut rng, 2 * n, p, 2, 1.0, 0.5);
        let t = DualCurrent::new(CurrentRep::chain(c.clone())).unwrap();
        let spec = BatterySpec { terms: 2, periodic: false, ..Default::default() };
        let omega = make_standard_symplectic(n).unwrap().0;

        // (L T)(φ) = T(ω ∧ φ)
        let phi = random_trig_form(&mut rng, 2 * n, p - 2, &spec);
        let lt = t.l().unwrap().evaluate(&TestForm::Trig(phi.clone())).unwrap();
        let direct = c.evaluate_trig(&phi.wedge_left(&omega).unwrap()).unwrap();
        prop_assert!(close(lt, direct, 1e-9), "{lt} vs {direct}");

        // [Λ, L] T = H T
        let psi = TestForm::Trig(random_trig_form(&mut rng, 2 * n, p, &spec));
        let lam_l = t.l().unwrap().lambda().evaluate(&psi).unwrap();
        let l_lam = if t.degree() >= 2 { t.lambda().l().unwrap().evaluate(&psi).unwrap() } else { 0.0 };
        let x = lam_l - l_lam;
        let y = t.h().evaluate(&psi).unwrap();
        prop_assert!(close(x, y, 1e-9), "{x} vs {y}");

        // dT = (-1)^{deg T + 1} ∂T
        let chi = random_trig_form(&mut rng, 2 * n, p - 1, &spec);
        let sign = if (t.degree() + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let dt = t.d().evaluate(&TestForm::Trig(chi.clone())).unwrap();
        let bd = sign * c.boundary().evaluate_trig(&chi).unwrap();
        prop_assert!(close(dt, bd, 1e-9), "{dt} vs {bd}");
    }
}
