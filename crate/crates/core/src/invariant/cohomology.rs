//! Cohomology, Hard Lefschetz, primitive cohomologies and the `dd^Λ`-lemma
//! subspaces of a Chevalley–Eilenberg model, by dense linear algebra.

use nalgebra::DMatrix;
use serde::Serialize;

use super::model::CEModel;
use crate::error::{Error, Result};
use crate::exteralg::{lefschetz_decompose, PointwiseForm};
use crate::linalg::{
    column_space, exact_rank, hcat, intersection_dim, lstsq, null_space, rank, vcat,
};

/// Agreement required between the two routes to `d^Λ`.
pub const DLAMBDA_ROUTE_TOL: f64 = 1e-10;

/// A subspace of `Λ^k` given by an orthonormal basis (columns).
#[derive(Clone, Debug)]
pub struct Subspace {
    pub degree: usize,
    pub basis: DMatrix<f64>,
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Betti numbers with harmonic (coefficient-orthogonal) representatives.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub betti: Vec<usize>,
    pub representatives: Vec<Subspace>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveRow {
    pub r: usize,
    pub ph: usize,
    pub ph_d: usize,
    pub natural_map_rank: usize,
    /// Whether `d` maps `P'^{r-1}` into `P'^r`.
    pub d_preserves_pprime: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DdLambdaRow {
    pub degree: usize,
    pub ker_d_cap_im_dlambda: usize,
    pub im_d_cap_ker_dlambda: usize,
    pub im_ddlambda: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub model: String,
    pub n: usize,
    pub betti: Vec<usize>,
    pub betti_exact: Vec<usize>,
    /// Entry `k`: whether `[ω]^k : H^{n-k} → H^{n+k}` is an isomorphism.
    pub hl_iso: Vec<bool>,
    /// Entry `r` for `0 ≤ r ≤ n`.
    pub ph_dims: Vec<usize>,
    pub primitive: Vec<PrimitiveRow>,
    pub ddlambda: Vec<DdLambdaRow>,
}

impl CohomologyReport {
    pub fn hard_lefschetz(&self) -> bool {
        self.hl_iso.iter().all(|&b| b)
    }
}

fn zeros_cols(rows: usize) -> DMatrix<f64> {
    DMatrix::zeros(rows, 0)
}

/// `Λ : Λ^k → Λ^{k-2}` with zero rows below degree 2.
fn lambda(m: &CEModel, k: usize) -> DMatrix<f64> {
    m.algebra().lambda(k).mat.clone()
}

/// `d^Λ : Λ^k → Λ^{k-1}` as `dΛ - Λd`, cross-checked against
/// `(-1)^{k+1} ⋆ d ⋆`.
pub fn dlambda_matrix(m: &CEModel, k: usize) -> Result<DMatrix<f64>> {
    let alg = m.algebra();
    let dim = m.dim();
    if k == 0 {
        return Ok(DMatrix::zeros(0, alg.size(0)));
    }
    if k > dim {
        return Err(Error::domain(format!("degree {k} above {dim}")));
    }
    let mut a = DMatrix::zeros(alg.size(k - 1), alg.size(k));
    if k < dim {
        a -= lambda(m, k + 1) * m.d(k);
    }
    if k >= 2 {
        a += m.d(k - 2) * lambda(m, k);
    }
    let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let b = &alg.star(dim - k + 1).mat * m.d(dim - k) * &alg.star(k).mat * sign;
    let diff = (&a - &b).abs().max();
    let scale = 1.0 + a.abs().max();
    if diff > DLAMBDA_ROUTE_TOL * scale {
        return Err(Error::Consistency {
            what: format!("d^Λ routes on degree {k}"),
            residual: diff,
            tol: DLAMBDA_ROUTE_TOL * scale,
        });
    }
    Ok(a)
}

/// `im(d : Λ^{k-1} → Λ^k)`.
fn exact_forms(m: &CEModel, k: usize) -> DMatrix<f64> {
    if k == 0 {
        zeros_cols(m.algebra().size(0))
    } else {
        column_space(m.d(k - 1))
    }
}

pub fn cohomology(m: &CEModel) -> Cohomology {
    let alg = m.algebra();
    let mut betti = Vec::new();
    let mut representatives = Vec::new();
    for k in 0..=m.dim() {
        let mut sys = m.d(k).clone();
        if k > 0 {
            sys = vcat(&sys, &m.d(k - 1).transpose());
        }
        let h = if sys.nrows() == 0 {
            DMatrix::identity(alg.size(k), alg.size(k))
        } else {
            null_space(&sys)
        };
        betti.push(h.ncols());
        representatives.push(Subspace {
            degree: k,
            basis: h,
        });
    }
    Cohomology {
        betti,
        representatives,
    }
}

/// Betti numbers from exact rational ranks of the differentials.
pub fn betti_exact(m: &CEModel) -> Vec<usize> {
    let alg = m.algebra();
    let ranks: Vec<usize> = (0..=m.dim()).map(|k| exact_rank(m.d(k))).collect();
    (0..=m.dim())
        .map(|k| alg.size(k) - ranks[k] - if k > 0 { ranks[k - 1] } else { 0 })
        .collect()
}

/// The map induced by `L^j` on `H^r`: its rank and a kernel basis (forms).
pub fn lefschetz_on_cohomology(
    m: &CEModel,
    coh: &Cohomology,
    r: usize,
    j: usize,
) -> Result<(usize, Subspace)> {
    let alg = m.algebra();
    let h = &coh.representatives[r].basis;
    let target = r + 2 * j;
    if target > m.dim() {
        return Ok((
            0,
            Subspace {
                degree: r,
                basis: h.clone(),
            },
        ));
    }
    let lj = alg.l_pow(r, j);
    let img = &lj * h;
    let b_target = exact_forms(m, target);
    let b_source = exact_forms(m, r);
    let rb = b_target.ncols();
    if b_source.ncols() > 0 && rank(&hcat(&(&lj * &b_source), &b_target)) != rb {
        return Err(Error::Consistency {
            what: format!("L^{j} maps exact {r}-forms to exact forms"),
            residual: 1.0,
            tol: 0.0,
        });
    }
    let rk = rank(&hcat(&img, &b_target)) - rb;
    let ns = null_space(&hcat(&img, &b_target));
    let x = ns.rows(0, h.ncols()).into_owned();
    let kernel = if x.ncols() == 0 {
        zeros_cols(h.ncols())
    } else {
        column_space(&x)
    };
    Ok((
        rk,
        Subspace {
            degree: r,
            basis: h * kernel,
        },
    ))
}

/// Entry `k` (0 ≤ k ≤ n): `[ω]^k : H^{n-k} → H^{n+k}` is an isomorphism.
pub fn hard_lefschetz_test(m: &CEModel) -> Result<Vec<bool>> {
    let coh = cohomology(m);
    let n = m.n();
    (0..=n)
        .map(|k| {
            let (rk, _) = lefschetz_on_cohomology(m, &coh, n - k, k)?;
            Ok(coh.betti[n - k] == coh.betti[n + k] && rk == coh.betti[n - k])
        })
        .collect()
}

/// `PH^r = ker(L^{n-r+1} : H^r → H^{2n-r+2})`.
pub fn ph(m: &CEModel, r: usize) -> Result<Subspace> {
    if r > m.n() {
        return Err(Error::domain(format!("PH^{r} needs r ≤ {}", m.n())));
    }
    let coh = cohomology(m);
    Ok(lefschetz_on_cohomology(m, &coh, r, m.n() - r + 1)?.1)
}

/// `P'^r`: primitive `d^Λ`-closed r-forms.
pub fn pprime(m: &CEModel, r: usize) -> Result<Subspace> {
    let sys = vcat(&lambda(m, r), &dlambda_matrix(m, r)?);
    let basis = if sys.nrows() == 0 {
        DMatrix::identity(m.algebra().size(r), m.algebra().size(r))
    } else {
        null_space(&sys)
    };
    Ok(Subspace { degree: r, basis })
}

/// `PH^r_d = (ker d ∩ P'^r) / d P'^{r-1}`, with a flag telling whether
/// `d P'^{r-1} ⊆ P'^r` (otherwise the quotient is by the intersection).
pub fn ph_d(m: &CEModel, r: usize) -> Result<(Subspace, bool)> {
    if r == 0 || r > m.n() {
        return Err(Error::domain(format!("PH^{r}_d needs 1 ≤ r ≤ {}", m.n())));
    }
    let p = pprime(m, r)?;
    let closed = if m.d(r).nrows() == 0 {
        p.basis.clone()
    } else {
        let x = null_space(&(m.d(r) * &p.basis));
        &p.basis * x
    };
    let dp = column_space(&(m.d(r - 1) * &pprime(m, r - 1)?.basis));
    let preserves = rank(&hcat(&dp, &p.basis)) == p.dim();
    let ns = null_space(&hcat(&closed, &dp));
    let inter = if ns.ncols() == 0 {
        zeros_cols(closed.nrows())
    } else {
        column_space(&(&closed * ns.rows(0, closed.ncols())))
    };
    let proj = DMatrix::identity(closed.nrows(), closed.nrows()) - &inter * inter.transpose();
    let basis = column_space(&(proj * &closed));
    Ok((Subspace { degree: r, basis }, preserves))
}

/// Rank of `[α]_{PH_d} ↦ [α]_{H}`.
pub fn natural_map_rank(m: &CEModel, r: usize) -> Result<usize> {
    let (phd, _) = ph_d(m, r)?;
    let b = exact_forms(m, r);
    Ok(rank(&hcat(&phd.basis, &b)) - b.ncols())
}

/// `dim ker d ∩ im d^Λ`, `dim im d ∩ ker d^Λ`, `dim im dd^Λ` on `Λ^k`.
pub fn ddlambda_subspaces(m: &CEModel, k: usize) -> Result<DdLambdaRow> {
    let size = m.algebra().size(k);
    let ker_d = if m.d(k).nrows() == 0 {
        DMatrix::identity(size, size)
    } else {
        null_space(m.d(k))
    };
    let im_dl = if k < m.dim() {
        column_space(&dlambda_matrix(m, k + 1)?)
    } else {
        zeros_cols(size)
    };
    let im_d = exact_forms(m, k);
    let dl = dlambda_matrix(m, k)?;
    let ker_dl = if dl.nrows() == 0 {
        DMatrix::identity(size, size)
    } else {
        null_space(&dl)
    };
    let im_ddl = if k == 0 {
        zeros_cols(size)
    } else {
        column_space(&(m.d(k - 1) * &dl))
    };
    Ok(DdLambdaRow {
        degree: k,
        ker_d_cap_im_dlambda: intersection_dim(&ker_d, &im_dl),
        im_d_cap_ker_dlambda: intersection_dim(&im_d, &ker_dl),
        im_ddlambda: im_ddl.ncols(),
    })
}

/// `dd^Λ` on `Λ^k`.
pub fn ddlambda_matrix(m: &CEModel, k: usize) -> Result<DMatrix<f64>> {
    if k == 0 {
        return Ok(DMatrix::zeros(m.algebra().size(0), m.algebra().size(0)));
    }
    Ok(m.d(k - 1) * dlambda_matrix(m, k)?)
}

/// A primitive `β` with `α = dd^Λ β`: the primitive part of `γ` in its
/// Lefschetz decomposition, where `dd^Λ γ = α` (`γ` is solved for with
/// minimal norm when not supplied).
#[derive(Clone, Debug)]
pub struct DdLambdaRefinement {
    pub gamma: PointwiseForm,
    pub beta: PointwiseForm,
    pub residual: f64,
}

pub fn primitive_ddlambda_refine(
    m: &CEModel,
    alpha: &PointwiseForm,
    gamma: Option<&PointwiseForm>,
    tol: f64,
) -> Result<DdLambdaRefinement> {
    let alg = m.algebra();
    let n = m.n();
    if alpha.n() != n {
        return Err(Error::Dimension {
            expected: 2 * n,
            found: alpha.dim(),
        });
    }
    let degree = match (alpha.homogeneous_degree()?, gamma) {
        (Some(k), _) => Some(k),
        (None, Some(g)) => g.homogeneous_degree()?,
        (None, None) => None,
    };
    let Some(k) = degree else {
        return Ok(DdLambdaRefinement {
            gamma: PointwiseForm::zero(n),
            beta: PointwiseForm::zero(n),
            residual: 0.0,
        });
    };
    let a = alg.to_dense(alpha, k);
    let lam = lambda(m, k);
    if lam.nrows() > 0 && (&lam * &a).abs().max() > tol {
        return Err(Error::domain("α is not primitive"));
    }
    let op = ddlambda_matrix(m, k)?;
    let g = match gamma {
        Some(g) => alg.to_dense(g, k),
        None => lstsq(&op, &a),
    };
    let res = (&op * &g - &a).abs().max();
    if res > tol {
        return Err(Error::domain(format!(
            "α is not in im dd^Λ (residual {res:.3e})"
        )));
    }
    let gamma = alg.from_dense(k, g.as_slice());
    let beta = lefschetz_decompose(&gamma)?
        .into_iter()
        .find(|c| c.r == 0)
        .map(|c| c.beta)
        .unwrap_or_else(|| PointwiseForm::zero(n));
    let b = alg.to_dense(&beta, k);
    let residual = (&op * b - &a).abs().max();
    if residual > tol {
        return Err(Error::Consistency {
            what: "α = dd^Λ β for the primitive part of γ".into(),
            residual,
            tol,
        });
    }
    Ok(DdLambdaRefinement {
        gamma,
        beta,
        residual,
    })
}

/// For symplectic-harmonic `k`-forms whose class satisfies
/// `L^{n-p}[α] = 0` (k = 2p), the largest degree-0 Lefschetz component
/// found over a basis of such forms. Returns `(forms checked, max |β_0|)`.
pub fn alpha0_check(m: &CEModel, k: usize) -> Result<(usize, f64)> {
    let alg = m.algebra();
    let n = m.n();
    let size = alg.size(k);
    let sys = vcat(m.d(k), &dlambda_matrix(m, k)?);
    let harm = if sys.nrows() == 0 {
        DMatrix::identity(size, size)
    } else {
        null_space(&sys)
    };
    if k % 2 == 1 || harm.ncols() == 0 {
        return Ok((harm.ncols(), 0.0));
    }
    let p = k / 2;
    let lj = alg.l_pow(k, n - p);
    let top = exact_forms(m, 2 * n);
    let ns = null_space(&hcat(&(&lj * &harm), &top));
    let x = ns.rows(0, harm.ncols()).into_owned();
    let admissible = if x.ncols() == 0 {
        zeros_cols(size)
    } else {
        &harm * column_space(&x)
    };
    let mut worst: f64 = 0.0;
    for c in 0..admissible.ncols() {
        let form = alg.from_dense(k, admissible.column(c).as_slice());
        for comp in lefschetz_decompose(&form)? {
            if comp.r == p {
                worst = worst.max(comp.beta.max_abs());
            }
        }
    }
    Ok((admissible.ncols(), worst))
}

pub fn report(m: &CEModel) -> Result<CohomologyReport> {
    let coh = cohomology(m);
    let n = m.n();
    let mut ph_dims = Vec::new();
    for r in 0..=n {
        ph_dims.push(ph(m, r)?.dim());
    }
    let mut primitive = Vec::new();
    for r in 1..=n {
        let (phd, preserves) = ph_d(m, r)?;
        primitive.push(PrimitiveRow {
            r,
            ph: ph_dims[r],
            ph_d: phd.dim(),
            natural_map_rank: natural_map_rank(m, r)?,
            d_preserves_pprime: preserves,
        });
    }
    let ddlambda = (0..=m.dim())
        .map(|k| ddlambda_subspaces(m, k))
        .collect::<Result<_>>()?;
    Ok(CohomologyReport {
        model: m.name().to_string(),
        n,
        betti: coh.betti.clone(),
        betti_exact: betti_exact(m),
        hl_iso: hard_lefschetz_test(m)?,
        ph_dims,
        primitive,
        ddlambda,
    })
}
