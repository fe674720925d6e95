//! The `sl2` action on currents of the torus, defined by duality.
//!
//! A [`DualCurrent`] is a base current together with a linear combination of
//! words in `L, Λ, H, ⋆, d` acting on test forms:
//! `(L T)(φ) = T(ω ∧ φ)`, `(Λ T)(φ) = T(Λ φ)`, `(H T)(φ) = T(-H φ)`,
//! `(⋆T)(φ) = T(⋆φ)` and `(dT)(φ) = (-1)^{deg T + 1} T(dφ)`.
//! The degree of a current of dimension `q` is `2n - q`.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::chains::{CurrentRep, TestForm, WedgeFactor};
use crate::error::{Error, Result};
use crate::exteralg::blade::{full_mask, wedge_sign};
use crate::exteralg::{self, make_standard_symplectic, Algebra, PointwiseForm};
use crate::testforms::{battery, BatterySpec, TrigForm};
use crate::torusfields::FieldForm;

/// One dual operation, acting on test forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DualOp {
    L,
    Lambda,
    /// Acts on test forms by `-H`.
    H,
    Star,
    /// Acts on test forms by `sign · d`.
    D {
        sign: f64,
    },
}

/// A current built from a base representation by dual operations.
#[derive(Clone, Debug)]
pub struct DualCurrent {
    base: Arc<CurrentRep>,
    n: usize,
    degree: usize,
    /// `Σ c · T∘(A_1 ∘ .. ∘ A_m)`: evaluation applies `A_m` to `φ` first.
    terms: Vec<(f64, Vec<DualOp>)>,
}

/// Outcome of a battery comparison.
#[derive(Clone, Copy, Debug)]
pub struct BatteryCheck {
    pub forms: usize,
    pub max_abs: f64,
}

impl DualCurrent {
    pub fn new(rep: CurrentRep) -> Result<DualCurrent> {
        let nn = rep.ambient();
        if nn % 2 != 0 {
            return Err(Error::Dimension {
                expected: nn + 1,
                found: nn,
            });
        }
        let dim = rep.dimension()?;
        Ok(DualCurrent {
            base: Arc::new(rep),
            n: nn / 2,
            degree: nn - dim,
            terms: vec![(1.0, Vec::new())],
        })
    }

    pub fn base(&self) -> &CurrentRep {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Degree of the test forms it eats.
    pub fn dimension(&self) -> usize {
        2 * self.n - self.degree
    }

    pub fn terms(&self) -> &[(f64, Vec<DualOp>)] {
        &self.terms
    }

    pub fn is_plain(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 1.0 && self.terms[0].1.is_empty()
    }

    fn zero_of_degree(&self, degree: usize) -> DualCurrent {
        DualCurrent {
            base: self.base.clone(),
            n: self.n,
            degree: degree.min(2 * self.n),
            terms: Vec::new(),
        }
    }

    fn push_op(&self, op: DualOp, degree: Option<usize>) -> DualCurrent {
        let Some(degree) = degree.filter(|&d| d <= 2 * self.n) else {
            return self.zero_of_degree(self.degree);
        };
        let mut out = self.zero_of_degree(degree);
        out.terms = self
            .terms
            .iter()
            .map(|(c, w)| {
                let mut w = w.clone();
                w.push(op);
                (*c, w)
            })
            .collect();
        out
    }

    /// `L T = T(ω ∧ ·)`; a plain chain becomes `ω ∧ chain`.
    pub fn l(&self) -> Result<DualCurrent> {
        if self.degree + 2 > 2 * self.n {
            return Ok(self.zero_of_degree(self.degree + 2));
        }
        if self.is_plain() {
            let (omega, _) = make_standard_symplectic(self.n)?;
            match &*self.base {
                CurrentRep::Chain { chain } => {
                    return DualCurrent::new(CurrentRep::wedge_constant(omega, chain.clone()));
                }
                CurrentRep::FormWedgeChain {
                    form: WedgeFactor::Constant { form },
                    chain,
                } => {
                    let a = exteralg::wedge(&omega, form)?;
                    return DualCurrent::new(CurrentRep::wedge_constant(a, chain.clone()));
                }
                _ => {}
            }
        }
        Ok(self.push_op(DualOp::L, Some(self.degree + 2)))
    }

    pub fn l_pow(&self, r: usize) -> Result<DualCurrent> {
        let mut t = self.clone();
        for _ in 0..r {
            t = t.l()?;
        }
        Ok(t)
    }

    pub fn lambda(&self) -> DualCurrent {
        if self.degree < 2 {
            return self.zero_of_degree(0);
        }
        self.push_op(DualOp::Lambda, Some(self.degree - 2))
    }

    /// `H T = T(-H ·)`, which multiplies a degree-`i` current by `n - i`.
    pub fn h(&self) -> DualCurrent {
        self.push_op(DualOp::H, Some(self.degree))
    }

    pub fn star(&self) -> DualCurrent {
        self.push_op(DualOp::Star, Some(2 * self.n - self.degree))
    }

    /// `dT = (-1)^{deg T + 1} T(d ·)`; equals `±∂T` on chains.
    pub fn d(&self) -> DualCurrent {
        if self.degree == 2 * self.n {
            return self.zero_of_degree(2 * self.n);
        }
        let sign = if (self.degree + 1) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        if self.is_plain() {
            if let CurrentRep::Chain { chain } = &*self.base {
                let b = chain.boundary();
                if let Ok(mut t) = DualCurrent::new(CurrentRep::chain(b)) {
                    t.degree = self.degree + 1;
                    t.terms[0].0 = sign;
                    return t;
                }
            }
        }
        self.push_op(DualOp::D { sign }, Some(self.degree + 1))
    }

    /// `d^Λ T = (dΛ - Λd) T`.
    pub fn dlambda(&self) -> Result<DualCurrent> {
        if self.degree == 0 {
            return Ok(self.zero_of_degree(0));
        }
        let a = self.lambda().d();
        let b = self.d().lambda();
        a.sub(&b)
    }

    pub fn scale(&self, s: f64) -> DualCurrent {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.0 *= s;
        }
        out
    }

    /// Sum of two currents over the same base.
    pub fn add(&self, other: &DualCurrent) -> Result<DualCurrent> {
        if !Arc::ptr_eq(&self.base, &other.base) && *self.base != *other.base {
            return Err(Error::domain(
                "adding currents with different base representations",
            ));
        }
        if self.terms.is_empty() {
            return Ok(other.clone());
        }
        if other.terms.is_empty() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::domain(format!(
                "adding currents of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn sub(&self, other: &DualCurrent) -> Result<DualCurrent> {
        self.add(&other.scale(-1.0))
    }

    /// `T(φ)` for a test form of degree `dimension()`.
    pub fn evaluate(&self, phi: &TestForm) -> Result<f64> {
        if let Some(k) = phi.degree()? {
            if k != self.dimension() {
                return Err(Error::domain(format!(
                    "{k}-form evaluated on a current of dimension {}",
                    self.dimension()
                )));
            }
        }
        let mut total = 0.0;
        for (c, word) in &self.terms {
            let mut psi = phi.clone();
            for op in word.iter().rev() {
                psi = apply_to_test_form(self.n, *op, &psi)?;
            }
            if psi.degree()?.is_none() {
                continue;
            }
            total += c * self.base.evaluate(&psi)?;
        }
        Ok(total)
    }

    /// Largest `|T(φ) - S(φ)|` over a battery of the common dimension.
    pub fn compare(&self, other: &DualCurrent, spec: &BatterySpec) -> Result<BatteryCheck> {
        if self.degree != other.degree && !(self.terms.is_empty() || other.terms.is_empty()) {
            return Err(Error::domain("comparing currents of different degree"));
        }
        let dim = self.dimension().min(other.dimension());
        let forms = battery(2 * self.n, dim, spec);
        let mut max_abs: f64 = 0.0;
        for f in &forms {
            let phi = TestForm::Trig(f.clone());
            let a = if self.terms.is_empty() {
                0.0
            } else {
                self.evaluate(&phi)?
            };
            let b = if other.terms.is_empty() {
                0.0
            } else {
                other.evaluate(&phi)?
            };
            max_abs = max_abs.max((a - b).abs());
        }
        Ok(BatteryCheck {
            forms: forms.len(),
            max_abs,
        })
    }

    /// Largest `|T(φ)|` over a battery.
    pub fn battery_norm(&self, spec: &BatterySpec) -> Result<BatteryCheck> {
        self.compare(&self.zero_of_degree(self.degree), spec)
    }

    /// The field `β` with `T(φ) = ∫ β ∧ φ`, when the base is a field.
    pub fn to_field(&self) -> Result<FieldForm> {
        let CurrentRep::Field { field } = &*self.base else {
            return Err(Error::Precondition(
                "the current has no field representation; smooth it first".into(),
            ));
        };
        let mut acc: Option<FieldForm> = None;
        for (c, word) in &self.terms {
            let mut beta = field.clone();
            for op in word {
                beta = adjoint_on_field(*op, &beta)?;
            }
            let beta = beta.scale(*c);
            acc = Some(match acc {
                None => beta,
                Some(a) => a.add(&beta)?,
            });
        }
        match acc {
            Some(f) => Ok(f),
            None => FieldForm::zeros(self.n, field.grid(), self.degree),
        }
    }

    /// Primitivity of a degree-`i ≤ n` current: `L^{n-i+1} T ≈ 0` on the
    /// battery, cross-checked against `Λ T ≈ 0`.
    pub fn is_primitive(&self, spec: &BatterySpec, tol: f64) -> Result<bool> {
        let i = self.degree;
        if i > self.n {
            return Err(Error::domain(format!(
                "primitivity needs degree ≤ {}, got {i}",
                self.n
            )));
        }
        let by_power = self.l_pow(self.n - i + 1)?.battery_norm(spec)?.max_abs <= tol;
        let by_lambda = self.lambda().battery_norm(spec)?.max_abs <= tol;
        if by_power != by_lambda {
            return Err(Error::Consistency {
                what: "L^{n-i+1} T = 0 versus Λ T = 0".into(),
                residual: 1.0,
                tol,
            });
        }
        Ok(by_power)
    }

    /// `T = Σ_r L^r B_r` with primitive field currents `B_r`.
    pub fn lefschetz_decompose(&self) -> Result<Vec<(usize, DualCurrent)>> {
        let f = self.to_field()?;
        f.lefschetz_decompose()
            .into_iter()
            .map(|(r, b)| Ok((r, DualCurrent::new(CurrentRep::field(b))?)))
            .collect()
    }

    /// The current `S` of degree `n - k` with `L^k S = T`.
    pub fn invert_l_power(&self, k: usize) -> Result<DualCurrent> {
        let f = self.to_field()?;
        DualCurrent::new(CurrentRep::field(f.invert_l_power(k)?))
    }
}

fn apply_to_test_form(n: usize, op: DualOp, phi: &TestForm) -> Result<TestForm> {
    let pointwise = |a: &PointwiseForm| -> Result<PointwiseForm> {
        match op {
            DualOp::L => exteralg::lefschetz_l(a),
            DualOp::Lambda => exteralg::dual_lefschetz(a),
            DualOp::H => Ok(exteralg::counting_h(a)?.scale(-1.0)),
            DualOp::Star => exteralg::star(a),
            DualOp::D { .. } => unreachable!("d is handled per representation"),
        }
    };
    let out_degree = |k: usize| -> Option<usize> {
        match op {
            DualOp::L => Some(k + 2).filter(|&d| d <= 2 * n),
            DualOp::Lambda => k.checked_sub(2),
            DualOp::H => Some(k),
            DualOp::Star => Some(2 * n - k),
            DualOp::D { .. } => Some(k + 1).filter(|&d| d <= 2 * n),
        }
    };
    Ok(match phi {
        TestForm::Constant(a) => match op {
            DualOp::D { .. } => TestForm::Constant(PointwiseForm::zero(n)),
            _ => TestForm::Constant(pointwise(a)?),
        },
        TestForm::Trig(t) => {
            let Some(k) = out_degree(t.degree) else {
                return Ok(TestForm::Trig(TrigForm::zero(2 * n, 0)));
            };
            match op {
                DualOp::D { sign } => TestForm::Trig(t.d().scale(sign)),
                _ => TestForm::Trig(t.map_pointwise(n, k, pointwise)?),
            }
        }
        TestForm::Field(f) => {
            let Some(_) = out_degree(f.degree()) else {
                return Ok(TestForm::Constant(PointwiseForm::zero(n)));
            };
            TestForm::Field(match op {
                DualOp::L => f.lefschetz_l()?,
                DualOp::Lambda => f.dual_lefschetz(),
                DualOp::H => f.counting_h().scale(-1.0),
                DualOp::Star => f.star(),
                DualOp::D { sign } => f.d()?.scale(sign),
            })
        }
    })
}

/// Matrix of `top(e_i ∧ e_j)` between degrees `k` and `2n - k`.
fn wedge_pairing(alg: &Algebra, dim: usize, k: usize) -> DMatrix<f64> {
    let a = alg.basis(k);
    let b = alg.basis(dim - k);
    let full = full_mask(dim);
    DMatrix::from_fn(a.len(), b.len(), |i, j| {
        if a[i].0 | b[j].0 == full {
            wedge_sign(a[i], b[j]) as f64
        } else {
            0.0
        }
    })
}

/// `A^† β` with `∫ β ∧ Aφ = ∫ A^†β ∧ φ`.
fn adjoint_on_field(op: DualOp, beta: &FieldForm) -> Result<FieldForm> {
    let n = beta.n();
    let dim = 2 * n;
    let kb = beta.degree();
    // Test forms have degree a = dim - kb_out and land in degree dim - kb.
    if let DualOp::D { sign } = op {
        // ∫ β ∧ dφ = (-1)^{kb+1} ∫ dβ ∧ φ.
        let s = if (kb + 1) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(beta.d()?.scale(sign * s));
    }
    let b_deg = dim - kb;
    let a_deg = match op {
        DualOp::L => b_deg - 2,
        DualOp::Lambda => b_deg + 2,
        DualOp::H => b_deg,
        DualOp::Star => dim - b_deg,
        DualOp::D { .. } => unreachable!(),
    };
    let alg = beta.algebra();
    let p: DMatrix<f64> = match op {
        DualOp::L => alg.l(a_deg).mat.clone(),
        DualOp::Lambda => alg.lambda(a_deg).mat.clone(),
        DualOp::H => {
            DMatrix::identity(alg.size(a_deg), alg.size(a_deg)) * -(n as f64 - a_deg as f64)
        }
        DualOp::Star => alg.star(a_deg).mat.clone(),
        DualOp::D { .. } => unreachable!(),
    };
    let w_out = wedge_pairing(alg, dim, dim - a_deg);
    let w_in = wedge_pairing(alg, dim, kb);
    let inv = w_out
        .transpose()
        .try_inverse()
        .ok_or_else(|| Error::domain("singular wedge pairing"))?;
    let adj = inv * p.transpose() * w_in.transpose();
    Ok(beta.apply_op(&crate::torusfields::op_from(adj), dim - a_deg))
}
