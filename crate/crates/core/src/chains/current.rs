//! Currents represented by chains, form fields, and forms wedged with chains.

use serde::{Deserialize, Serialize};

use super::chain::PolyChain;
use crate::error::{Error, Result};
use crate::exteralg::PointwiseForm;
use crate::testforms::TrigForm;
use crate::torusfields::FieldForm;

/// Spectral coefficients below this fraction of the largest are dropped when
/// a field is expanded into plane waves.
pub const TRIG_EXPANSION_REL_TOL: f64 = 1e-15;

/// The form factor of `α ∧ T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WedgeFactor {
    Constant { form: PointwiseForm },
    Field { field: FieldForm },
}

impl WedgeFactor {
    pub fn degree(&self) -> Result<usize> {
        match self {
            WedgeFactor::Constant { form } => Ok(form.homogeneous_degree()?.unwrap_or(0)),
            WedgeFactor::Field { field } => Ok(field.degree()),
        }
    }
}

/// A current on R^N or on the torus.
///
/// A field `α` of degree `k` acts by `φ ↦ ∫ α ∧ φ` and has dimension
/// `N - k`; `α ∧ T` acts by `φ ↦ T(α ∧ φ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurrentRep {
    Chain { chain: PolyChain },
    Field { field: FieldForm },
    FormWedgeChain { form: WedgeFactor, chain: PolyChain },
}

/// Test forms a current can be evaluated on.
#[derive(Clone, Debug)]
pub enum TestForm {
    Constant(PointwiseForm),
    Trig(TrigForm),
    Field(FieldForm),
}

impl TestForm {
    pub fn degree(&self) -> Result<Option<usize>> {
        Ok(match self {
            TestForm::Constant(a) => a.homogeneous_degree()?,
            TestForm::Trig(t) => (!t.terms.is_empty()).then_some(t.degree),
            TestForm::Field(f) => Some(f.degree()),
        })
    }

    pub fn ambient(&self) -> usize {
        match self {
            TestForm::Constant(a) => a.dim(),
            TestForm::Trig(t) => t.ambient,
            TestForm::Field(f) => 2 * f.n(),
        }
    }

    /// Plane-wave expansion (exact for constant and band-limited inputs).
    pub fn to_trig(&self) -> Result<TrigForm> {
        match self {
            TestForm::Constant(a) => {
                if a.is_zero() {
                    Ok(TrigForm::zero(a.dim(), 0))
                } else {
                    TrigForm::constant(a)
                }
            }
            TestForm::Trig(t) => Ok(t.clone()),
            TestForm::Field(f) => Ok(field_to_trig(f)),
        }
    }
}

fn field_to_trig(f: &FieldForm) -> TrigForm {
    let scale = f.spectral().iter().map(|c| c.norm()).fold(0.0, f64::max);
    f.to_trig(TRIG_EXPANSION_REL_TOL * scale)
}

impl CurrentRep {
    pub fn chain(c: PolyChain) -> CurrentRep {
        CurrentRep::Chain { chain: c }
    }

    pub fn field(f: FieldForm) -> CurrentRep {
        CurrentRep::Field { field: f }
    }

    pub fn wedge_constant(a: PointwiseForm, c: PolyChain) -> CurrentRep {
        CurrentRep::FormWedgeChain {
            form: WedgeFactor::Constant { form: a },
            chain: c,
        }
    }

    pub fn wedge_field(a: FieldForm, c: PolyChain) -> CurrentRep {
        CurrentRep::FormWedgeChain {
            form: WedgeFactor::Field { field: a },
            chain: c,
        }
    }

    pub fn ambient(&self) -> usize {
        match self {
            CurrentRep::Chain { chain } => chain.ambient(),
            CurrentRep::Field { field } => 2 * field.n(),
            CurrentRep::FormWedgeChain { chain, .. } => chain.ambient(),
        }
    }

    /// Dimension of the current, i.e. the degree of the forms it eats.
    pub fn dimension(&self) -> Result<usize> {
        match self {
            CurrentRep::Chain { chain } => Ok(chain.dim()),
            CurrentRep::Field { field } => Ok(2 * field.n() - field.degree()),
            CurrentRep::FormWedgeChain { form, chain } => {
                let k = form.degree()?;
                chain.dim().checked_sub(k).ok_or_else(|| {
                    Error::domain(format!("{k}-form wedged with a {}-chain", chain.dim()))
                })
            }
        }
    }

    /// `T(φ)`.
    pub fn evaluate(&self, phi: &TestForm) -> Result<f64> {
        if phi.ambient() != self.ambient() {
            return Err(Error::Dimension {
                expected: self.ambient(),
                found: phi.ambient(),
            });
        }
        let dim = self.dimension()?;
        match phi.degree()? {
            None => return Ok(0.0),
            Some(k) if k != dim => {
                return Err(Error::domain(format!(
                    "{k}-form evaluated on a {dim}-current"
                )));
            }
            _ => {}
        }
        match self {
            CurrentRep::Chain { chain } => chain.evaluate_trig(&phi.to_trig()?),
            CurrentRep::Field { field } => match phi {
                TestForm::Field(g) => field.wedge(g)?.integrate(),
                _ => field.pair_trig(&phi.to_trig()?),
            },
            CurrentRep::FormWedgeChain { form, chain } => {
                let psi = match form {
                    WedgeFactor::Constant { form } => phi.to_trig()?.wedge_left(form)?,
                    WedgeFactor::Field { field } => field_to_trig(field).wedge(&phi.to_trig()?)?,
                };
                if psi.terms.is_empty() {
                    return Ok(0.0);
                }
                chain.evaluate_trig(&psi)
            }
        }
    }

    /// `∂T(φ) = T(dφ)` for a trigonometric test form.
    pub fn evaluate_boundary(&self, phi: &TrigForm) -> Result<f64> {
        self.evaluate(&TestForm::Trig(phi.d()))
    }
}

/// `∫_c f` for a closed or open chain `c` and a field of degree `dim c`.
pub fn pair_with_cycle(f: &FieldForm, c: &PolyChain) -> Result<f64> {
    if f.degree() != c.dim() {
        return Err(Error::domain(format!(
            "{}-field paired with a {}-chain",
            f.degree(),
            c.dim()
        )));
    }
    if 2 * f.n() != c.ambient() {
        return Err(Error::Dimension {
            expected: 2 * f.n(),
            found: c.ambient(),
        });
    }
    c.evaluate_trig(&field_to_trig(f))
}
