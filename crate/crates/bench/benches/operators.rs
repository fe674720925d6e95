use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symharm::chains::random_chain;
use symharm::deform::{deform, GridSpec};
use symharm::exteralg::{lefschetz_decompose, star};
use symharm::selftest::{algebra_selftest, random_mixed_form, SelfTestSpec};
use symharm::testforms::{random_trig_form, BatterySpec};
use symharm::{FieldForm, Grid};

fn pointwise(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = random_mixed_form(&mut rng, 3).unwrap();
    let a3 = a.part(3);
    c.bench_function("star n=3", |b| b.iter(|| star(black_box(&a3)).unwrap()));
    c.bench_function("lefschetz_decompose n=3 k=3", |b| {
        b.iter(|| lefschetz_decompose(black_box(&a3)).unwrap())
    });
}

fn fields(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let grid = Grid::uniform(4, 16).unwrap();
    let spec = BatterySpec {
        terms: 4,
        max_freq: 3,
        ..Default::default()
    };
    let f = FieldForm::from_trig(2, &grid, &random_trig_form(&mut rng, 4, 2, &spec)).unwrap();
    let s = f.to_spectral();
    c.bench_function("to_spectral 16^4 2-form", |b| {
        b.iter(|| black_box(&f).to_spectral())
    });
    c.bench_function("d spectral 16^4 2-form", |b| {
        b.iter(|| black_box(&s).d().unwrap())
    });
    c.bench_function("dlambda spectral 16^4 2-form", |b| {
        b.iter(|| black_box(&s).dlambda().unwrap())
    });
}

fn chains(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = random_chain(&mut rng, 3, 1, 4, 1.5, 0.6);
    let g = GridSpec::seeded(3, 0.3, 3).unwrap();
    c.bench_function("deform 1-chain in R^3", |b| {
        b.iter(|| deform(black_box(&t), &g).unwrap())
    });
}

fn selftest(c: &mut Criterion) {
    let spec = SelfTestSpec {
        samples: 2,
        ns: vec![1, 2],
        ..Default::default()
    };
    let mut g = c.benchmark_group("selftest");
    g.sample_size(10);
    g.bench_function("2 samples n<=2", |b| {
        b.iter(|| algebra_selftest(black_box(&spec)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, pointwise, fields, chains, selftest);
criterion_main!(benches);
