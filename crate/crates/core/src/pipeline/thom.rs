//! Thom classes of coordinate subtori and which support branch they fall in.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exteralg::{wedge, Blade, PointwiseForm};
use crate::invariant::CEModel;
use crate::linalg::{exact_rank, hcat, intersection_dim, null_space};

/// The subtorus spanned by the coframe axes `axes` (1-based, in the model's
/// original coframe).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subtorus {
    pub axes: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThomBranch {
    /// A symplectic Harmonic representative vanishing on an open set exists.
    SmallSupport,
    /// Every symplectic Harmonic representative is nowhere vanishing.
    NowhereVanishing,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThomReport {
    pub model: String,
    pub n: usize,
    pub axes: Vec<usize>,
    pub dimension: usize,
    pub codimension: usize,
    pub codim_odd: bool,
    pub isotropic: bool,
    pub coisotropic: bool,
    pub symplectic: bool,
    pub lagrangian: bool,
    /// The dual form `τ` with `e^A ∧ τ = vol`, in the original coframe.
    pub tau: PointwiseForm,
    /// `n - p` for even codimension `2p`.
    pub cup_power: Option<usize>,
    /// `[ω^{n-p} ∧ τ] = 0`, from cohomology of the invariant model.
    pub cup_vanishes: Option<bool>,
    /// `∫_N ω^{n-p} = 0`, from the restriction of `ω^{n-p}` to `N`.
    pub cup_vanishes_geometric: Option<bool>,
    /// `[ω ∧ τ] = 0`.
    pub omega_tau_vanishes: bool,
    pub branch: ThomBranch,
}

/// Classify the Thom class of a coordinate subtorus.
pub fn thom_checks(model: &CEModel, sub: &Subtorus) -> Result<ThomReport> {
    let n = model.n();
    let dim = 2 * n;
    let mut axes = sub.axes.clone();
    axes.sort_unstable();
    axes.dedup();
    if axes.len() != sub.axes.len() || axes.iter().any(|&a| a == 0 || a > dim) {
        return Err(Error::Unsupported(format!(
            "{:?} is not a set of coframe axes of R^{dim}",
            sub.axes
        )));
    }
    let d = axes.len();
    if d == 0 || d == dim {
        return Err(Error::Unsupported(
            "the subtorus must have positive dimension and codimension".into(),
        ));
    }
    let codim = dim - d;
    let a_blade = Blade(axes.iter().fold(0u16, |m, &a| m | (1 << (a - 1))));
    let comp = Blade(((1u32 << dim) - 1) as u16 & !a_blade.0);
    let e_a = PointwiseForm::basis(n, &a_blade.indices1())?;
    let mut tau = PointwiseForm::basis(n, &comp.indices1())?;
    let vol = wedge(&e_a, &tau)?;
    if vol.coeff(Blade(((1u32 << dim) - 1) as u16)) < 0.0 {
        tau = tau.scale(-1.0);
    }

    let alg = model.algebra();
    let tau_d = model.to_darboux(&tau)?;
    let dtau = model.d(codim) * alg.to_dense(&tau_d, codim);
    if dtau.amax() > 1e-12 {
        return Err(Error::Unsupported(format!(
            "the coordinate subtorus {axes:?} is not closed in the model {}",
            model.name()
        )));
    }

    let om = omega_matrix(model.omega(), dim);
    let basis = DMatrix::from_fn(dim, d, |r, c| if r == axes[c] - 1 { 1.0 } else { 0.0 });
    let restricted = basis.transpose() * &om * &basis;
    let isotropic = restricted.amax() == 0.0;
    let symplectic = d % 2 == 0 && restricted.clone().determinant().abs() > 1e-12;
    let orth = null_space(&(basis.transpose() * &om));
    let coisotropic = intersection_dim(&orth, &basis) == orth.ncols();
    let lagrangian = isotropic && d == n;

    let std = crate::exteralg::make_standard_symplectic(n)?.0;
    let omega_tau_vanishes = if codim + 2 <= dim {
        class_vanishes(model, &wedge(&std, &tau_d)?, codim + 2)?
    } else {
        true
    };
    if isotropic && !omega_tau_vanishes {
        return Err(Error::Consistency {
            what: "[ω ∧ τ] ≠ 0 for an isotropic subtorus".into(),
            residual: 1.0,
            tol: 0.0,
        });
    }

    let (cup_power, cup_vanishes, cup_geo) = if codim % 2 == 1 {
        (None, None, None)
    } else {
        let p = codim / 2;
        let r = n - p;
        let w_r = crate::exteralg::lefschetz_l_pow(&PointwiseForm::scalar(n, 1.0), r)?;
        let by_model = class_vanishes(model, &wedge(&w_r, &tau_d)?, dim)?;
        let w_orig = (0..r).try_fold(PointwiseForm::scalar(n, 1.0), |acc, _| {
            wedge(&acc, model.omega())
        })?;
        let by_geometry = w_orig.coeff(a_blade).abs() <= 1e-12;
        if by_model != by_geometry {
            return Err(Error::Consistency {
                what: "[ω^{n-p} ∧ τ] = 0 versus ∫_N ω^{n-p} = 0".into(),
                residual: w_orig.coeff(a_blade).abs(),
                tol: 1e-12,
            });
        }
        (Some(r), Some(by_model), Some(by_geometry))
    };
    let branch = match cup_vanishes {
        Some(false) => ThomBranch::NowhereVanishing,
        _ => ThomBranch::SmallSupport,
    };
    Ok(ThomReport {
        model: model.name().to_string(),
        n,
        axes,
        dimension: d,
        codimension: codim,
        codim_odd: codim % 2 == 1,
        isotropic,
        coisotropic,
        symplectic,
        lagrangian,
        tau,
        cup_power,
        cup_vanishes,
        cup_vanishes_geometric: cup_geo,
        omega_tau_vanishes,
        branch,
    })
}

/// `Ω_{ij} = ω(e_i, e_j)`.
fn omega_matrix(omega: &PointwiseForm, dim: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(dim, dim);
    for (b, c) in omega.terms() {
        let ij = b.indices0();
        om[(ij[0], ij[1])] += c;
        om[(ij[1], ij[0])] -= c;
    }
    om
}

/// Whether a closed Darboux-coframe form of degree `k` is exact in the
/// model, by exact rank of `[d_{k-1} | x]` against `d_{k-1}`.
fn class_vanishes(model: &CEModel, x: &PointwiseForm, k: usize) -> Result<bool> {
    let alg = model.algebra();
    let v: DVector<f64> = alg.to_dense(x, k);
    if v.amax() == 0.0 {
        return Ok(true);
    }
    let dprev = model.d(k - 1);
    let col = DMatrix::from_column_slice(v.len(), 1, v.as_slice());
    Ok(exact_rank(&hcat(dprev, &col)) == exact_rank(dprev))
}
