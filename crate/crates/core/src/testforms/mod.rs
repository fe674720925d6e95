//! Trigonometric test forms: finite sums `Re Σ c e^{2πi f·x} e^B` on R^N.
//!
//! They are closed under `d`, under wedging with constant forms and under
//! constant pointwise operators, and they integrate exactly over simplices.
//! With integer frequencies they are periodic and serve as test forms on
//! the torus.

mod simplex_ft;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use simplex_ft::simplex_exp_integral;

use crate::error::{Error, Result};
use crate::exteralg::blade::{blades_of_grade, full_mask, wedge_sign, Blade};
use crate::exteralg::PointwiseForm;

#[derive(Clone, Debug, PartialEq)]
pub struct TrigTerm {
    pub coeff: Complex64,
    pub freq: Vec<f64>,
    pub blade: Blade,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrigForm {
    pub ambient: usize,
    pub degree: usize,
    pub terms: Vec<TrigTerm>,
}

impl TrigForm {
    pub fn zero(ambient: usize, degree: usize) -> Self {
        TrigForm {
            ambient,
            degree,
            terms: Vec::new(),
        }
    }

    /// A constant form on R^{2n}.
    pub fn constant(a: &PointwiseForm) -> Result<Self> {
        let degree = a.homogeneous_degree()?.unwrap_or(0);
        let ambient = a.dim();
        Ok(TrigForm {
            ambient,
            degree,
            terms: a
                .terms()
                .map(|(b, c)| TrigTerm {
                    coeff: Complex64::new(c, 0.0),
                    freq: vec![0.0; ambient],
                    blade: b,
                })
                .collect(),
        })
    }

    /// A single plane-wave term.
    pub fn wave(ambient: usize, blade: Blade, freq: Vec<f64>, coeff: Complex64) -> Self {
        TrigForm {
            ambient,
            degree: blade.grade(),
            terms: vec![TrigTerm { coeff, freq, blade }],
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.freq.iter().all(|f| (f - f.round()).abs() < 1e-12))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= s;
        }
        out
    }

    pub fn add(&self, other: &TrigForm) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut out = self.clone();
        if out.terms.is_empty() {
            out.degree = other.degree;
        }
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    /// Coefficients at `x` in the lexicographic basis of the form's degree.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let basis = blades_of_grade(self.ambient, self.degree);
        let mut out = vec![0.0; basis.len()];
        for t in &self.terms {
            let phase: f64 = 2.0 * PI * t.freq.iter().zip(x).map(|(f, xi)| f * xi).sum::<f64>();
            let v = (t.coeff * Complex64::from_polar(1.0, phase)).re;
            let pos = basis
                .binary_search(&t.blade)
                .expect("blade of the form's degree");
            out[pos] += v;
        }
        out
    }

    /// Exact exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = TrigForm::zero(self.ambient, self.degree + 1);
        for t in &self.terms {
            for j in 0..self.ambient {
                if t.freq[j] == 0.0 {
                    continue;
                }
                let s = wedge_sign(Blade(1 << j), t.blade);
                if s == 0 {
                    continue;
                }
                out.terms.push(TrigTerm {
                    coeff: t.coeff * Complex64::new(0.0, 2.0 * PI * t.freq[j] * s as f64),
                    freq: t.freq.clone(),
                    blade: Blade(t.blade.0 | (1 << j)),
                });
            }
        }
        out
    }

    /// `a ∧ φ` for a constant form `a` on the same space.
    pub fn wedge_left(&self, a: &PointwiseForm) -> Result<Self> {
        if a.dim() != self.ambient {
            return Err(Error::Dimension {
                expected: self.ambient,
                found: a.dim(),
            });
        }
        let ka = a.homogeneous_degree()?.unwrap_or(0);
        let mut out = TrigForm::zero(self.ambient, self.degree + ka);
        for t in &self.terms {
            for (b, c) in a.terms() {
                let s = wedge_sign(b, t.blade);
                if s != 0 {
                    out.terms.push(TrigTerm {
                        coeff: t.coeff * (c * s as f64),
                        freq: t.freq.clone(),
                        blade: Blade(b.0 | t.blade.0),
                    });
                }
            }
        }
        Ok(out)
    }

    /// `φ ∧ ψ` for two trigonometric forms on the same space.
    pub fn wedge(&self, other: &TrigForm) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        let mut out = TrigForm::zero(self.ambient, self.degree + other.degree);
        for a in &self.terms {
            for b in &other.terms {
                let s = wedge_sign(a.blade, b.blade);
                if s == 0 {
                    continue;
                }
                let blade = Blade(a.blade.0 | b.blade.0);
                let half = 0.5 * s as f64;
                out.terms.push(TrigTerm {
                    coeff: a.coeff * b.coeff * half,
                    freq: a.freq.iter().zip(&b.freq).map(|(x, y)| x + y).collect(),
                    blade,
                });
                out.terms.push(TrigTerm {
                    coeff: a.coeff * b.coeff.conj() * half,
                    freq: a.freq.iter().zip(&b.freq).map(|(x, y)| x - y).collect(),
                    blade,
                });
            }
        }
        Ok(out)
    }

    /// Apply a constant linear pointwise operator to every term's form part.
    pub fn map_pointwise<F>(&self, n: usize, out_degree: usize, op: F) -> Result<Self>
    where
        F: Fn(&PointwiseForm) -> Result<PointwiseForm>,
    {
        if 2 * n != self.ambient {
            return Err(Error::Dimension {
                expected: 2 * n,
                found: self.ambient,
            });
        }
        let mut out = TrigForm::zero(self.ambient, out_degree);
        for t in &self.terms {
            let mut e = PointwiseForm::zero(n);
            e.add_term(t.blade, 1.0);
            for (b, c) in op(&e)?.terms() {
                if b.grade() != out_degree {
                    return Err(Error::domain("operator changed degree unexpectedly"));
                }
                out.terms.push(TrigTerm {
                    coeff: t.coeff * c,
                    freq: t.freq.clone(),
                    blade: b,
                });
            }
        }
        Ok(out)
    }

    /// Multiply each wave by a real Fourier multiplier of its frequency.
    pub fn multiply_symbol<F: Fn(&[f64]) -> f64>(&self, symbol: F) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= symbol(&t.freq);
        }
        out.terms.retain(|t| t.coeff.norm() > 0.0);
        out
    }

    /// `∫_σ φ` over the oriented simplex `[v_0, .., v_p]`, exactly.
    pub fn integrate_simplex(&self, verts: &[Vec<f64>]) -> f64 {
        let p = verts.len() - 1;
        if p != self.degree {
            return 0.0;
        }
        let nn = self.ambient;
        let v0 = &verts[0];
        let edges = DMatrix::from_fn(nn, p, |i, j| verts[j + 1][i] - v0[i]);
        let mut total = 0.0;
        let mut minors: Vec<(Blade, f64)> = Vec::new();
        for t in &self.terms {
            let m = match minors.iter().find(|(b, _)| *b == t.blade) {
                Some(&(_, m)) => m,
                None => {
                    let rows = t.blade.indices0();
                    let m = if p == 0 {
                        1.0
                    } else {
                        DMatrix::from_fn(p, p, |i, j| edges[(rows[i], j)]).determinant()
                    };
                    minors.push((t.blade, m));
                    m
                }
            };
            if m == 0.0 {
                continue;
            }
            let w: Vec<f64> = t.freq.iter().map(|f| 2.0 * PI * f).collect();
            let a0: f64 = w.iter().zip(v0).map(|(a, b)| a * b).sum();
            let z: Vec<f64> = (0..p)
                .map(|j| (0..nn).map(|i| w[i] * edges[(i, j)]).sum())
                .collect();
            let integral = Complex64::from_polar(1.0, a0) * simplex_exp_integral(&z);
            total += m * (t.coeff * integral).re;
        }
        total
    }

    /// Largest absolute frequency component among the terms.
    pub fn max_frequency(&self) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| t.freq.iter().map(|f| f.abs()))
            .fold(0.0, f64::max)
    }
}

/// Settings for seeded random batteries of test forms.
#[derive(Clone, Debug)]
pub struct BatterySpec {
    pub count: usize,
    pub terms: usize,
    pub max_freq: i32,
    pub periodic: bool,
    pub seed: u64,
}

impl Default for BatterySpec {
    fn default() -> Self {
        BatterySpec {
            count: 50,
            terms: 4,
            max_freq: 2,
            periodic: true,
            seed: 17,
        }
    }
}

/// A random test form of the given degree.
pub fn random_trig_form<R: Rng>(
    rng: &mut R,
    ambient: usize,
    degree: usize,
    spec: &BatterySpec,
) -> TrigForm {
    let basis = blades_of_grade(ambient, degree);
    let mut f = TrigForm::zero(ambient, degree);
    if basis.is_empty() {
        return f;
    }
    for i in 0..spec.terms.max(1) {
        let blade = basis[rng.random_range(0..basis.len())];
        let freq: Vec<f64> = (0..ambient)
            .map(|_| {
                if i == 0 {
                    // Keep a constant term in the mix.
                    0.0
                } else if spec.periodic {
                    rng.random_range(-spec.max_freq..=spec.max_freq) as f64
                } else {
                    rng.random_range(-(spec.max_freq as f64)..=spec.max_freq as f64)
                }
            })
            .collect();
        let coeff = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        f.terms.push(TrigTerm { coeff, freq, blade });
    }
    f
}

/// `count` seeded random test forms of one degree.
pub fn battery(ambient: usize, degree: usize, spec: &BatterySpec) -> Vec<TrigForm> {
    let mut rng =
        ChaCha8Rng::seed_from_u64(spec.seed ^ ((ambient as u64) << 32) ^ ((degree as u64) << 40));
    (0..spec.count)
        .map(|_| random_trig_form(&mut rng, ambient, degree, spec))
        .collect()
}

/// Sign of `e_{B^c} ∧ e_B` against the volume blade, with `B^c` returned.
pub(crate) fn complement_sign(ambient: usize, b: Blade) -> (Blade, f64) {
    let comp = Blade(full_mask(ambient) & !b.0);
    (comp, wedge_sign(comp, b) as f64)
}
