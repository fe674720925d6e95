//! Comass: the supremum of `⟨a, w⟩` over simple unit k-vectors.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::blade::Blade;
use super::form::PointwiseForm;
use crate::error::{Error, Result};

/// Sampling and refinement budget.
#[derive(Clone, Debug)]
pub struct ComassBudget {
    pub samples: usize,
    pub refine_starts: usize,
    pub refine_iters: usize,
    pub seed: u64,
}

impl Default for ComassBudget {
    fn default() -> Self {
        ComassBudget {
            samples: 400,
            refine_starts: 8,
            refine_iters: 300,
            seed: 0x5eed,
        }
    }
}

/// Bracketing estimate of the comass.
#[derive(Clone, Debug, PartialEq)]
pub struct ComassEstimate {
    /// Value attained by an explicit orthonormal frame.
    pub lower_bound: f64,
    /// Best value after local refinement.
    pub heuristic: f64,
    /// Euclidean coefficient norm, which dominates the comass.
    pub upper_bound: f64,
    /// Whether the estimate is exact (degrees 0, 1, 2n-1, 2n).
    pub exact: bool,
}

/// `⟨a, v_1 ∧ .. ∧ v_k⟩` for the columns of `v`.
pub fn evaluate_on_frame(a: &PointwiseForm, v: &DMatrix<f64>) -> f64 {
    let k = v.ncols();
    let mut s = 0.0;
    for (b, c) in a.terms() {
        if b.grade() != k {
            continue;
        }
        s += c * minor(v, b);
    }
    s
}

fn minor(v: &DMatrix<f64>, b: Blade) -> f64 {
    let rows = b.indices0();
    let k = rows.len();
    if k == 0 {
        return 1.0;
    }
    DMatrix::from_fn(k, k, |i, j| v[(rows[i], j)]).determinant()
}

fn orthonormalize(v: DMatrix<f64>) -> DMatrix<f64> {
    let k = v.ncols();
    let q = v.qr().q();
    q.columns(0, k).into_owned()
}

pub fn comass(a: &PointwiseForm, budget: &ComassBudget) -> Result<ComassEstimate> {
    let dim = a.dim();
    let k = match a.homogeneous_degree()? {
        None => {
            return Ok(ComassEstimate {
                lower_bound: 0.0,
                heuristic: 0.0,
                upper_bound: 0.0,
                exact: true,
            })
        }
        Some(k) => k,
    };
    if k > dim {
        return Err(Error::domain(format!("degree {k} exceeds {dim}")));
    }
    let norm = a.norm();
    if k <= 1 || k + 1 >= dim {
        // Every k-vector is simple in these degrees.
        return Ok(ComassEstimate {
            lower_bound: norm,
            heuristic: norm,
            upper_bound: norm,
            exact: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut frames: Vec<(f64, DMatrix<f64>)> = (0..budget.samples.max(1))
        .map(|_| {
            let g = DMatrix::from_fn(dim, k, |_, _| StandardNormal.sample(&mut rng));
            let v = orthonormalize(g);
            (evaluate_on_frame(a, &v).abs(), v)
        })
        .collect();
    frames.sort_by(|x, y| y.0.total_cmp(&x.0));
    let sampled = frames[0].0;
    let mut best = sampled;
    let mut best_frame = frames[0].1.clone();
    for (_, start) in frames.into_iter().take(budget.refine_starts.max(1)) {
        let (val, v) = refine(a, start, budget.refine_iters);
        if val > best {
            best = val;
            best_frame = v;
        }
    }
    let certified = evaluate_on_frame(a, &orthonormalize(best_frame)).abs();
    Ok(ComassEstimate {
        lower_bound: certified.max(sampled),
        heuristic: best,
        upper_bound: norm,
        exact: false,
    })
}

/// Projected gradient ascent of `|⟨a, v_1 ∧ .. ∧ v_k⟩|` on orthonormal frames.
fn refine(a: &PointwiseForm, mut v: DMatrix<f64>, iters: usize) -> (f64, DMatrix<f64>) {
    let (dim, k) = v.shape();
    let mut val = evaluate_on_frame(a, &v);
    if val < 0.0 {
        v.column_mut(0).neg_mut();
        val = -val;
    }
    let mut step = 0.5;
    for _ in 0..iters {
        let mut g = DMatrix::zeros(dim, k);
        for j in 0..k {
            for i in 0..dim {
                let mut w = v.clone();
                w.column_mut(j).fill(0.0);
                w[(i, j)] = 1.0;
                g[(i, j)] = evaluate_on_frame(a, &w);
            }
        }
        // Remove the component tangent to rotations within the frame.
        let proj = &v * (v.transpose() * &g);
        let g = g - proj;
        if g.norm() < 1e-13 {
            break;
        }
        let mut improved = false;
        while step > 1e-12 {
            let cand = orthonormalize(&v + &g * step);
            let cv = evaluate_on_frame(a, &cand);
            if cv > val {
                v = cand;
                val = cv;
                improved = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (val, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_degrees() {
        let a = PointwiseForm::basis(2, &[1]).unwrap();
        let c = comass(&a, &ComassBudget::default()).unwrap();
        assert!(c.exact && c.lower_bound == 1.0);
        let b = PointwiseForm::basis(2, &[1, 2, 3]).unwrap().scale(-3.0);
        assert_eq!(
            comass(&b, &ComassBudget::default()).unwrap().lower_bound,
            3.0
        );
    }

    #[test]
    fn kahler_form_has_comass_one() {
        let w =
            PointwiseForm::from_terms(2, [(&[1usize, 2][..], 1.0), (&[3, 4][..], 1.0)]).unwrap();
        let c = comass(&w, &ComassBudget::default()).unwrap();
        assert!(c.lower_bound <= 1.0 + 1e-12);
        assert!((c.heuristic - 1.0).abs() < 1e-8, "{c:?}");
        assert!((c.upper_bound - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn homogeneity() {
        let w =
            PointwiseForm::from_terms(2, [(&[1usize, 3][..], 1.0), (&[2, 4][..], 0.5)]).unwrap();
        let b = ComassBudget::default();
        let c1 = comass(&w, &b).unwrap().heuristic;
        let c2 = comass(&w.scale(-2.0), &b).unwrap().heuristic;
        assert!((c2 - 2.0 * c1).abs() < 1e-8);
    }
}
