//! Randomized checks of the operator identities of the symplectic exterior
//! algebra, pointwise and on form fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exteralg::{counting_h, dual_lefschetz, lefschetz_l, star, Algebra, PointwiseForm};
use crate::testforms::{random_trig_form, BatterySpec};
use crate::torusfields::{FieldForm, Grid, Representation};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelfTestSpec {
    pub samples: usize,
    pub ns: Vec<usize>,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SelfTestSpec {
    fn default() -> Self {
        SelfTestSpec {
            samples: 200,
            ns: vec![1, 2, 3],
            seed: 0,
            tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub identity: String,
    pub n: usize,
    pub samples: usize,
    /// Largest residual relative to `1 + |terms|_∞`.
    pub max_residual: f64,
    pub passed: bool,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfTestReport {
    pub rows: Vec<IdentityRow>,
    pub tol: f64,
    pub seconds: f64,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.max_residual).fold(0.0, f64::max)
    }
}

/// A form with random coefficients in every degree.
pub fn random_mixed_form<R: Rng>(rng: &mut R, n: usize) -> Result<PointwiseForm> {
    let alg = Algebra::get(n)?;
    let mut out = PointwiseForm::zero(n);
    for k in 0..=2 * n {
        out = out + random_homogeneous_form(rng, n, k, alg);
    }
    Ok(out)
}

fn random_homogeneous_form<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    alg: &Algebra,
) -> PointwiseForm {
    let v: Vec<f64> = (0..alg.size(k))
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    PointwiseForm::from_dense(n, k, &v)
}

/// A lower bound for the nodal sup norm, in either representation.
fn size(f: &FieldForm) -> f64 {
    match f.representation() {
        Representation::Nodal => f.max_abs(),
        Representation::Spectral => f.max_abs() / f.nodes() as f64,
    }
}

fn rel(residual: f64, terms: &[f64]) -> f64 {
    residual / (1.0 + terms.iter().copied().fold(0.0, f64::max))
}

type FieldCheck = fn(&FieldForm) -> Result<f64>;

/// Identities on fields with the degrees where every term is defined.
fn field_identities(n: usize) -> Vec<(&'static str, (i64, i64), FieldCheck)> {
    let top = 2 * n as i64;
    vec![
        ("[d, L] = 0", (0, top - 3), |f| {
            let a = f.lefschetz_l()?.d()?;
            let b = f.d()?.lefschetz_l()?;
            Ok(rel(a.max_diff(&b)?, &[size(&a), size(&b)]))
        }),
        ("[d^Λ, Λ] = 0", (3, top), |f| {
            let a = dl(&f.dual_lefschetz())?;
            let b = dl(f)?.dual_lefschetz();
            Ok(rel(a.max_diff(&b)?, &[size(&a), size(&b)]))
        }),
        ("[d, Λ] = d^Λ", (2, top - 1), |f| {
            let a = f.dual_lefschetz().d()?.sub(&f.d()?.dual_lefschetz())?;
            let b = dl(f)?;
            Ok(rel(a.max_diff(&b)?, &[size(&a), size(&b)]))
        }),
        ("[d^Λ, L] = d", (1, top - 3), |f| {
            let a = dl(&f.lefschetz_l()?)?.sub(&dl(f)?.lefschetz_l()?)?;
            let b = f.d()?;
            Ok(rel(a.max_diff(&b)?, &[size(&a), size(&b)]))
        }),
        ("[dd^Λ, L] = 0", (1, top - 2), |f| {
            let a = dl(&f.lefschetz_l()?)?.d()?;
            let b = dl(f)?.d()?.lefschetz_l()?;
            Ok(rel(a.max_diff(&b)?, &[size(&a), size(&b)]))
        }),
        ("[dd^Λ, Λ] = 0", (3, top), |f| {
            let a = dl(&f.dual_lefschetz())?.d()?;
            let b = dl(f)?.d()?.dual_lefschetz();
            Ok(rel(a.max_diff(&b)?, &[size(&a), size(&b)]))
        }),
        ("d d^Λ + d^Λ d = 0", (1, top - 1), |f| {
            let a = dl(f)?.d()?;
            let b = dl(&f.d()?)?;
            Ok(rel(a.max_diff(&b.scale(-1.0))?, &[size(&a), size(&b)]))
        }),
        ("(-1)^{k+1} ⋆d⋆ = dΛ - Λd", (1, top), |f| {
            let a = dl(f)?;
            let k = f.degree();
            let d_lam = if k >= 2 {
                Some(f.dual_lefschetz().d()?)
            } else {
                None
            };
            let lam_d = if k < f.n() * 2 {
                Some(f.d()?.dual_lefschetz())
            } else {
                None
            };
            let b = match (d_lam, lam_d) {
                (Some(x), Some(y)) if x.degree() == y.degree() => x.sub(&y)?,
                (Some(x), _) => x,
                (None, Some(y)) if y.degree() == k - 1 => y.scale(-1.0),
                _ => a.scale(0.0),
            };
            Ok(rel(a.max_diff(&b)?, &[size(&a), size(&b)]))
        }),
    ]
}

/// `d^Λ` by its definition; agreement with `dΛ - Λd` is a row of its own.
fn dl(f: &FieldForm) -> Result<FieldForm> {
    let sign = if (f.degree() + 1) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(f.star().d()?.star().scale(sign))
}

/// Run every identity on `spec.samples` random inputs for each `n`.
pub fn algebra_selftest(spec: &SelfTestSpec) -> Result<SelfTestReport> {
    let start = std::time::Instant::now();
    let mut rows = Vec::new();
    for &n in &spec.ns {
        let alg = Algebra::get(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ (n as u64) << 20);
        let mut push = |name: &str, samples: usize, worst: f64, seconds: f64| {
            rows.push(IdentityRow {
                identity: name.into(),
                n,
                samples,
                max_residual: worst,
                passed: worst <= spec.tol,
                seconds,
            })
        };

        let clock = std::time::Instant::now();
        let mut worst = [0.0f64; 4];
        for _ in 0..spec.samples {
            let a = random_mixed_form(&mut rng, n)?;
            let la = lefschetz_l(&a)?;
            let lam = dual_lefschetz(&a)?;
            let h = counting_h(&a)?;
            let r = &dual_lefschetz(&la)? - &lefschetz_l(&lam)?;
            worst[0] = worst[0].max(rel((&r - &h).max_abs(), &[r.max_abs(), h.max_abs()]));
            let r = &counting_h(&lam)? - &dual_lefschetz(&h)?;
            worst[1] = worst[1].max(rel((&r - &lam.scale(2.0)).max_abs(), &[r.max_abs()]));
            let r = &counting_h(&la)? - &lefschetz_l(&h)?;
            worst[2] = worst[2].max(rel((&r + &la.scale(2.0)).max_abs(), &[r.max_abs()]));
            let k = rng.random_range(0..=2 * n);
            let b = random_homogeneous_form(&mut rng, n, k, alg);
            let ss = star(&star(&b)?)?;
            worst[3] = worst[3].max(rel((&ss - &b).max_abs(), &[b.max_abs()]));
        }
        for (name, w) in ["[Λ, L] = H", "[H, Λ] = 2Λ", "[H, L] = -2L", "⋆⋆ = 1"]
            .iter()
            .zip(worst)
        {
            push(name, spec.samples, w, clock.elapsed().as_secs_f64() / 4.0);
        }

        // Four nodes per axis resolve the frequencies of the test fields.
        let grid = Grid::uniform(2 * n, 4)?;
        let bspec = BatterySpec {
            terms: 3,
            max_freq: 1,
            ..Default::default()
        };
        for (name, degrees, check) in field_identities(n) {
            let (lo, hi) = degrees;
            if hi < lo {
                continue;
            }
            let clock = std::time::Instant::now();
            let mut w: f64 = 0.0;
            for _ in 0..spec.samples {
                let k = rng.random_range(lo..=hi) as usize;
                let phi = random_trig_form(&mut rng, 2 * n, k, &bspec);
                let f = FieldForm::from_trig(n, &grid, &phi)?.to_spectral();
                w = w.max(check(&f)?);
            }
            push(name, spec.samples, w, clock.elapsed().as_secs_f64());
        }
    }
    Ok(SelfTestReport {
        rows,
        tol: spec.tol,
        seconds: start.elapsed().as_secs_f64(),
    })
}
