use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symharm::chains::random_chain;
use symharm::deform::{deform, skeletal_defect, verify_certificate, GridSpec, SKELETAL_TOL};
use symharm::PolyChain;

fn case(n: usize, p: usize, eps: f64, seed: u64) -> (PolyChain, GridSpec) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = random_chain(&mut rng, n, p, 4, 1.5, 0.6);
    (t, GridSpec::seeded(n, eps, seed).unwrap())
}

#[test]
fn random_chains_are_certified() {
    let start = std::time::Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..24u64 {
        let n = 2 + (seed % 3) as usize;
        let p = 1 + (seed / 3 % 2) as usize;
        if p >= n {
            continue;
        }
        let (t, g) = case(n, p, 0.3, seed);
        let res = deform(&t, &g).unwrap();
        let c = verify_certificate(&t, &g, &res).unwrap();
        worst = worst.max(c.identity_residual / c.identity_scale);
        eprintln!(
            "N={n} p={p} P={} R={} S={} res={:.1e} d=({:.2},{:.2},{:.2}) bound={}",
            res.p.len(),
            res.r.len(),
            res.s.len(),
            c.identity_residual,
            c.p_support.max_distance,
            c.r_support.max_distance,
            c.s_support.max_distance,
            c.bound
        );
    }
    eprintln!("worst {worst:e} in {:?}", start.elapsed());
}

#[test]
fn closed_chains_deform_without_s() {
    // The boundary of a random triangle chain is a closed 1-chain.
    for seed in 0..6u64 {
        let n = 2 + (seed % 3) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_chain(&mut rng, n, 2.min(n), 3, 1.0, 0.5).boundary();
        let res = deform(&t, &GridSpec::seeded(n, 0.25, seed).unwrap()).unwrap();
        assert!(res.s.is_empty());
        assert!(res.p.boundary().is_empty());
        assert!(res.certificate.passes());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decomposition_identity_and_skeleton(seed in 0u64..10_000, n in 2usize..5, eps in 0.2f64..0.6) {
        let (t, g) = case(n, 1, eps, seed);
        let res = deform(&t, &g).unwrap();
        prop_assert!(res.certificate.passes(), "{:?}", res.certificate);
        prop_assert!(skeletal_defect(&res.p, &res.grid) <= SKELETAL_TOL);
    }

    #[test]
    fn deformation_is_linear(seed in 0u64..10_000, a in -2.0f64..2.0) {
        let (t, g) = case(3, 1, 0.35, seed);
        let one = deform(&t, &g).unwrap();
        let scaled = deform(&t.scale(a), &one.grid).unwrap();
        let diff = scaled.p.sub(&one.p.scale(a)).unwrap().canonicalize();
        prop_assert!(diff.mass() <= 1e-9 * (1.0 + one.p.mass()));
    }
}
