//! Lefschetz decomposition, inversion of powers of `L`, and primitivity.

use nalgebra::{DMatrix, DVector};

use super::algebra::Algebra;
use super::form::PointwiseForm;
use crate::error::{Error, Result};
use crate::linalg;

/// One term `L^r/r! β_{k-2r}` of a Lefschetz decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct LefschetzComponent {
    pub r: usize,
    pub beta: PointwiseForm,
}

fn degree_or_zero(a: &PointwiseForm) -> Result<Option<usize>> {
    a.homogeneous_degree()
}

/// `a = Σ_r (L^r / r!) β_{k-2r}` with every `β` primitive.
///
/// Solved densely in the basis of primitive subspaces. The returned list
/// covers every admissible `r` in increasing order, zero components included.
pub fn lefschetz_decompose(a: &PointwiseForm) -> Result<Vec<LefschetzComponent>> {
    let Some(k) = degree_or_zero(a)? else {
        return Ok(Vec::new());
    };
    let alg = Algebra::get(a.n())?;
    let v = alg.to_dense(a, k);
    Ok(alg
        .decomposition(k)
        .iter()
        .map(|blk| LefschetzComponent {
            r: blk.r,
            beta: alg.from_dense(k - 2 * blk.r, &blk.proj.apply(v.as_slice())),
        })
        .collect())
}

/// Second solve of the same decomposition: unknowns range over the full
/// spaces `Λ^{k-2r}`, primitivity enters as equations, and the stacked
/// system is solved by least squares. Agreement with [`lefschetz_decompose`]
/// certifies uniqueness.
pub fn lefschetz_decompose_lstsq(a: &PointwiseForm) -> Result<Vec<LefschetzComponent>> {
    let Some(k) = degree_or_zero(a)? else {
        return Ok(Vec::new());
    };
    let n = a.n();
    let alg = Algebra::get(n)?;
    let rs: Vec<usize> = (k.saturating_sub(n)..=k / 2).collect();
    let widths: Vec<usize> = rs.iter().map(|r| alg.size(k - 2 * r)).collect();
    let total: usize = widths.iter().sum();
    let prim_rows: usize = rs.iter().map(|r| alg.lambda(k - 2 * r).rows()).sum();
    let mut sys = DMatrix::zeros(alg.size(k) + prim_rows, total);
    let mut rhs = DVector::zeros(alg.size(k) + prim_rows);
    rhs.rows_mut(0, alg.size(k)).copy_from(&alg.to_dense(a, k));
    let (mut col, mut row) = (0, alg.size(k));
    for (&r, &w) in rs.iter().zip(&widths) {
        let m = k - 2 * r;
        let fact: f64 = (1..=r).map(|i| i as f64).product();
        let block = alg.l_pow(m, r) / fact;
        sys.view_mut((0, col), (alg.size(k), w)).copy_from(&block);
        let lam = &alg.lambda(m).mat;
        sys.view_mut((row, col), lam.shape()).copy_from(lam);
        row += lam.nrows();
        col += w;
    }
    let x = linalg::lstsq(&sys, &rhs);
    let mut out = Vec::new();
    let mut off = 0;
    for (&r, &w) in rs.iter().zip(&widths) {
        out.push(LefschetzComponent {
            r,
            beta: alg.from_dense(k - 2 * r, &x.as_slice()[off..off + w]),
        });
        off += w;
    }
    Ok(out)
}

/// Decomposition by repeated application of `Λ`: the highest component is
/// isolated by `Λ^r`, since `Λ^r L^r β_m = r! (n-m)!/(n-m-r)! β_m` for
/// primitive `β_m` while lower terms are annihilated.
pub fn lefschetz_decompose_sl2(a: &PointwiseForm) -> Result<Vec<LefschetzComponent>> {
    let Some(k) = degree_or_zero(a)? else {
        return Ok(Vec::new());
    };
    let n = a.n();
    let alg = Algebra::get(n)?;
    let rs: Vec<usize> = (k.saturating_sub(n)..=k / 2).collect();
    let mut rest = alg.to_dense(a, k);
    let mut out = Vec::new();
    for &r in rs.iter().rev() {
        let m = k - 2 * r;
        let mut v = rest.clone();
        for s in 0..r {
            v = &alg.lambda(k - 2 * s).mat * v;
        }
        let fact: f64 = (1..=r).map(|i| i as f64).product();
        let scale: f64 = (0..r).map(|j| (n - m - j) as f64).product();
        let beta = v / scale;
        rest -= alg.l_pow(m, r) * &beta / fact;
        out.push(LefschetzComponent {
            r,
            beta: alg.from_dense(m, beta.as_slice()),
        });
    }
    out.reverse();
    Ok(out)
}

/// Sum `Σ L^r/r! β_{k-2r}`.
pub fn lefschetz_reconstruct(n: usize, comps: &[LefschetzComponent]) -> Result<PointwiseForm> {
    let mut out = PointwiseForm::zero(n);
    for c in comps {
        let fact: f64 = (1..=c.r).map(|i| i as f64).product();
        out += &super::ops::lefschetz_l_pow(&c.beta, c.r)?.scale(1.0 / fact);
    }
    Ok(out)
}

/// The unique `a` of degree `n - k` with `L^k a = b`.
pub fn invert_l_power(k: usize, b: &PointwiseForm) -> Result<PointwiseForm> {
    let n = b.n();
    if k > n {
        return Err(Error::domain(format!("power {k} exceeds n = {n}")));
    }
    let alg = Algebra::get(n)?;
    if let Some(d) = b.homogeneous_degree()? {
        if d != n + k {
            return Err(Error::domain(format!(
                "expected degree {}, found {d}",
                n + k
            )));
        }
    }
    let v = alg.to_dense(b, n + k);
    Ok(alg.from_dense(n - k, &alg.inv_l_pow(k).apply(v.as_slice())))
}

/// Whether `‖Λa‖ <= tol`; the equivalent test `‖ω^{n-k+1} ∧ a‖ <= tol` is
/// evaluated alongside and a gross disagreement is reported as an error.
pub fn is_primitive(a: &PointwiseForm, tol: f64) -> Result<bool> {
    let n = a.n();
    let Some(k) = a.homogeneous_degree()? else {
        return Ok(true);
    };
    if k > n {
        return Err(Error::domain(format!(
            "primitivity is defined for degree <= n, got {k}"
        )));
    }
    let by_lambda = super::ops::dual_lefschetz(a)?.norm();
    let by_power = super::ops::lefschetz_l_pow(a, n - k + 1)?.norm();
    let (p, q) = (by_lambda <= tol, by_power <= tol);
    if p != q {
        let (lo, hi) = if by_lambda < by_power {
            (by_lambda, by_power)
        } else {
            (by_power, by_lambda)
        };
        if lo <= 1e-3 * tol.max(1e-12) && hi > 1e3 * tol {
            return Err(Error::Consistency {
                what: "Λa = 0 versus ω^{n-k+1} ∧ a = 0".into(),
                residual: hi,
                tol,
            });
        }
    }
    Ok(p)
}
