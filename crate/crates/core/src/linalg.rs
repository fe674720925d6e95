//! Small dense linear-algebra helpers shared by the algebraic modules.
//!
//! Every rank decision goes through [`rank`] with a relative singular-value
//! threshold, so dimensions reported by the cohomology code are integers
//! decided in one place. [`exact_rank`] repeats the decision over the
//! rationals for certification runs.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};

/// Relative singular-value threshold used for rank decisions.
pub const RANK_REL_TOL: f64 = 1e-9;

/// Singular values plus a full right-singular basis (columns of `v`).
struct FullSvd {
    sigma: Vec<f64>,
    u: DMatrix<f64>,
    v: DMatrix<f64>,
}

fn full_svd(a: &DMatrix<f64>) -> FullSvd {
    let (r, c) = a.shape();
    let n = r.max(c).max(1);
    // Pad to square so that both singular bases come back complete.
    let mut sq = DMatrix::<f64>::zeros(n, n);
    sq.view_mut((0, 0), (r, c)).copy_from(a);
    let svd = sq.svd(true, true);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let u_full = svd.u.expect("u requested");
    let vt_full = svd.v_t.expect("v_t requested");
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u = DMatrix::from_fn(n, n, |i, k| u_full[(i, order[k])]);
    let v = DMatrix::from_fn(n, n, |i, k| vt_full[(order[k], i)]);
    FullSvd {
        sigma,
        u: u.rows(0, r).into_owned(),
        v: v.rows(0, c).into_owned(),
    }
}

fn threshold(sigma: &[f64], rel: f64) -> f64 {
    let smax = sigma.first().copied().unwrap_or(0.0);
    (smax * rel).max(1e-300)
}

/// Numerical rank with relative tolerance [`RANK_REL_TOL`].
pub fn rank(a: &DMatrix<f64>) -> usize {
    rank_with(a, RANK_REL_TOL)
}

pub fn rank_with(a: &DMatrix<f64>, rel: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let s = full_svd(a);
    let t = threshold(&s.sigma, rel);
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    if smax < 1e-14 {
        return 0;
    }
    s.sigma
        .iter()
        .take(a.nrows().min(a.ncols()))
        .filter(|&&x| x > t)
        .count()
}

/// Orthonormal basis (as columns) of the null space of `a`.
pub fn null_space(a: &DMatrix<f64>) -> DMatrix<f64> {
    let c = a.ncols();
    if c == 0 {
        return DMatrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return DMatrix::identity(c, c);
    }
    let s = full_svd(a);
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let r = if smax < 1e-14 {
        0
    } else {
        let t = threshold(&s.sigma, RANK_REL_TOL);
        s.sigma
            .iter()
            .take(a.nrows().min(c))
            .filter(|&&x| x > t)
            .count()
    };
    s.v.columns(r, c - r).into_owned()
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn column_space(a: &DMatrix<f64>) -> DMatrix<f64> {
    let r = a.nrows();
    if a.ncols() == 0 || r == 0 {
        return DMatrix::zeros(r, 0);
    }
    let s = full_svd(a);
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let k = if smax < 1e-14 {
        0
    } else {
        let t = threshold(&s.sigma, RANK_REL_TOL);
        s.sigma
            .iter()
            .take(r.min(a.ncols()))
            .filter(|&&x| x > t)
            .count()
    };
    s.u.columns(0, k).into_owned()
}

/// Horizontal concatenation; tolerates zero-column operands.
pub fn hcat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let r = a.nrows().max(b.nrows());
    let mut m = DMatrix::zeros(r, a.ncols() + b.ncols());
    if a.ncols() > 0 {
        m.view_mut((0, 0), a.shape()).copy_from(a);
    }
    if b.ncols() > 0 {
        m.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    }
    m
}

/// Vertical concatenation; tolerates zero-row operands.
pub fn vcat(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let c = a.ncols().max(b.ncols());
    let mut m = DMatrix::zeros(a.nrows() + b.nrows(), c);
    if a.nrows() > 0 {
        m.view_mut((0, 0), a.shape()).copy_from(a);
    }
    if b.nrows() > 0 {
        m.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    }
    m
}

/// Dimension of the intersection of two column spaces.
pub fn intersection_dim(u: &DMatrix<f64>, v: &DMatrix<f64>) -> usize {
    let du = rank(u);
    let dv = rank(v);
    let both = rank(&hcat(u, v));
    du + dv - both
}

/// Solve a square system, `None` if singular.
pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    if a.nrows() == 0 {
        return Some(DVector::zeros(0));
    }
    a.clone().lu().solve(b)
}

/// Minimum-norm least-squares solution via SVD.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    if a.nrows() == 0 {
        return DVector::zeros(a.ncols());
    }
    let s = full_svd(a);
    let t = threshold(&s.sigma, 1e-12);
    let k = a.nrows().min(a.ncols());
    let mut x = DVector::zeros(a.ncols());
    for i in 0..k {
        if s.sigma[i] <= t {
            break;
        }
        let coef = s.u.column(i).dot(b) / s.sigma[i];
        x += s.v.column(i) * coef;
    }
    x
}

/// Rank over the rationals. Entries are converted exactly from their binary
/// floating-point values, so integer and dyadic models are certified exactly.
pub fn exact_rank(a: &DMatrix<f64>) -> usize {
    let (r, c) = a.shape();
    let mut m: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            (0..c)
                .map(|j| {
                    BigRational::from_f64(a[(i, j)])
                        .unwrap_or_else(|| BigRational::from_integer(BigInt::zero()))
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..c {
        let Some(piv) = (rank..r).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        for i in 0..r {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &p;
                for j in col..c {
                    let d = &f * &m[rank][j];
                    m[i][j] -= d;
                }
            }
        }
        rank += 1;
        if rank == r {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_null_space_of_wide_matrix() {
        let a = DMatrix::from_row_slice(2, 4, &[1.0, 2.0, 0.0, 0.0, 2.0, 4.0, 0.0, 1.0]);
        assert_eq!(rank(&a), 2);
        let ns = null_space(&a);
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).amax() < 1e-12);
        assert_eq!(exact_rank(&a), 2);
    }

    #[test]
    fn intersection_of_planes() {
        let u = DMatrix::from_column_slice(3, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let v = DMatrix::from_column_slice(3, 2, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(intersection_dim(&u, &v), 1);
    }

    #[test]
    fn lstsq_is_minimum_norm() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let x = lstsq(&a, &DVector::from_vec(vec![2.0]));
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
