//! Sparse reference implementations of the pointwise operators.
//!
//! These work term by term on [`PointwiseForm`]s. The dense tables in
//! [`super::Algebra`] are assembled from them, so every nodewise field
//! operator inherits exactly these conventions.

use nalgebra::DMatrix;

use super::blade::{contract, full_mask, wedge_sign, Blade};
use super::form::{PointwiseForm, PolyVector, MAX_N};
use crate::error::{Error, Result};

/// Darboux form `ω = Σ dx_i ∧ dy_i` and its Poisson bivector `π = ω^{-1}`.
///
/// The sign of `π` is fixed by requiring `Λω = n`, which makes
/// `[Λ, L] = H` hold with `H = Σ (n - k) Π^k`.
pub fn make_standard_symplectic(n: usize) -> Result<(PointwiseForm, PolyVector)> {
    if n == 0 || n > MAX_N {
        return Err(Error::domain(format!(
            "half-dimension {n} outside 1..={MAX_N}"
        )));
    }
    let mut omega = PointwiseForm::zero(n);
    let mut pi = PolyVector::zero(n);
    for i in 0..n {
        let b = Blade((1 << (2 * i)) | (1 << (2 * i + 1)));
        omega.add_term(b, 1.0);
        // Entry π^{x_i y_i} of the inverse matrix of ω.
        pi.add_term(b, -1.0);
    }
    let lw = interior(&pi, &omega)?;
    let c = lw.coeff(Blade::EMPTY);
    if (c + n as f64).abs() < 1e-12 {
        pi = pi.scale(-1.0);
    } else if (c - n as f64).abs() > 1e-12 {
        return Err(Error::Consistency {
            what: "normalization Λω = n".into(),
            residual: (c - n as f64).abs(),
            tol: 1e-12,
        });
    }
    Ok((omega, pi))
}

pub fn wedge(a: &PointwiseForm, b: &PointwiseForm) -> Result<PointwiseForm> {
    a.same_dim(b)?;
    let mut out = PointwiseForm::zero(a.n());
    for (ba, ca) in a.terms() {
        for (bb, cb) in b.terms() {
            let s = wedge_sign(ba, bb);
            if s != 0 {
                out.add_term(Blade(ba.0 | bb.0), s as f64 * ca * cb);
            }
        }
    }
    Ok(out)
}

/// Interior product `ι_v a`. For a basis polyvector `∂_{b_1} ∧ .. ∧ ∂_{b_m}`
/// the contractions are applied last factor first:
/// `ι_{b_1} ∘ .. ∘ ι_{b_m}`.
pub fn interior(v: &PolyVector, a: &PointwiseForm) -> Result<PointwiseForm> {
    v.same_dim_form(a)?;
    let mut out = PointwiseForm::zero(a.n());
    for (bv, cv) in v.terms() {
        let order = bv.indices0();
        for (ba, ca) in a.terms() {
            let mut cur = ba;
            let mut sign = 1i32;
            let mut alive = true;
            for &i in order.iter().rev() {
                match contract(i, cur) {
                    Some((nb, s)) => {
                        cur = nb;
                        sign *= s;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                out.add_term(cur, sign as f64 * cv * ca);
            }
        }
    }
    Ok(out)
}

fn standard(n: usize) -> Result<(PointwiseForm, PolyVector)> {
    make_standard_symplectic(n)
}

/// `L a = ω ∧ a`.
pub fn lefschetz_l(a: &PointwiseForm) -> Result<PointwiseForm> {
    let (omega, _) = standard(a.n())?;
    wedge(&omega, a)
}

/// `Λ a = ι_π a`.
pub fn dual_lefschetz(a: &PointwiseForm) -> Result<PointwiseForm> {
    let (_, pi) = standard(a.n())?;
    interior(&pi, a)
}

/// `H a = Σ_k (n - k) Π^k a`.
pub fn counting_h(a: &PointwiseForm) -> Result<PointwiseForm> {
    standard(a.n())?;
    let n = a.n() as f64;
    let mut out = PointwiseForm::zero(a.n());
    for (b, c) in a.terms() {
        out.add_term(b, (n - b.grade() as f64) * c);
    }
    Ok(out)
}

/// `L^r a`.
pub fn lefschetz_l_pow(a: &PointwiseForm, r: usize) -> Result<PointwiseForm> {
    let mut out = a.clone();
    for _ in 0..r {
        out = lefschetz_l(&out)?;
    }
    Ok(out)
}

/// `ω^n / n!`, which equals `e^{1 2 .. 2n}` in Darboux coordinates.
pub fn volume_form(n: usize) -> Result<PointwiseForm> {
    let (omega, _) = standard(n)?;
    let mut v = PointwiseForm::scalar(n, 1.0);
    for j in 1..=n {
        v = wedge(&v, &omega)?.scale(1.0 / j as f64);
    }
    Ok(v)
}

fn pi_matrix(pi: &PolyVector) -> DMatrix<f64> {
    let d = pi.dim();
    let mut m = DMatrix::zeros(d, d);
    for (b, c) in pi.terms() {
        if b.grade() == 2 {
            let idx = b.indices0();
            m[(idx[0], idx[1])] += c;
            m[(idx[1], idx[0])] -= c;
        }
    }
    m
}

/// Pairing of two basis blades: the Gram determinant of `π` restricted to
/// the rows of `a` and the columns of `b`.
pub(crate) fn blade_pairing(pim: &DMatrix<f64>, a: Blade, b: Blade) -> f64 {
    let ia = a.indices0();
    let ib = b.indices0();
    if ia.len() != ib.len() {
        return 0.0;
    }
    if ia.is_empty() {
        return 1.0;
    }
    let sub = DMatrix::from_fn(ia.len(), ib.len(), |r, c| pim[(ia[r], ib[c])]);
    sub.determinant()
}

/// The pairing on `Λ^k` extending `π = ω^{-1}` on 1-forms by Gram determinants.
pub fn pairing(a: &PointwiseForm, b: &PointwiseForm) -> Result<f64> {
    a.same_dim(b)?;
    let (ka, kb) = (a.homogeneous_degree()?, b.homogeneous_degree()?);
    if let (Some(x), Some(y)) = (ka, kb) {
        if x != y {
            return Err(Error::domain(format!("pairing of degrees {x} and {y}")));
        }
    }
    let (_, pi) = standard(a.n())?;
    let pim = pi_matrix(&pi);
    let mut s = 0.0;
    for (ba, ca) in a.terms() {
        for (bb, cb) in b.terms() {
            s += ca * cb * blade_pairing(&pim, ba, bb);
        }
    }
    Ok(s)
}

/// Symplectic Hodge star: the unique form with `⋆a ∧ b = (a, b) ω^n/n!`.
///
/// In a basis, `⋆e_A = Σ_B (e_A, e_B) σ(B^c, B) e_{B^c}` where `σ(B^c, B)`
/// is the sign of `e_{B^c} ∧ e_B` against the volume blade.
pub fn star(a: &PointwiseForm) -> Result<PointwiseForm> {
    a.homogeneous_degree()?;
    let n = a.n();
    let (_, pi) = standard(n)?;
    let pim = pi_matrix(&pi);
    let dim = 2 * n;
    let full = Blade(full_mask(dim));
    let mut out = PointwiseForm::zero(n);
    for (ba, ca) in a.terms() {
        for bb in super::blade::blades_of_grade(dim, ba.grade()) {
            let p = blade_pairing(&pim, ba, bb);
            if p.abs() < 0.5 {
                continue;
            }
            let comp = Blade(full.0 & !bb.0);
            let s = wedge_sign(comp, bb) as f64;
            out.add_term(comp, ca * p * s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, idx: &[usize]) -> PointwiseForm {
        PointwiseForm::basis(n, idx).unwrap()
    }

    #[test]
    fn darboux_forms() {
        let (w1, _) = make_standard_symplectic(1).unwrap();
        assert_eq!(w1, e(1, &[1, 2]));
        let (w2, pi2) = make_standard_symplectic(2).unwrap();
        assert_eq!(w2.len(), 2);
        assert_eq!(w2.get(&[1, 2]), 1.0);
        assert_eq!(w2.get(&[3, 4]), 1.0);
        assert_eq!(pi2.len(), 2);
        assert!(make_standard_symplectic(0).is_err());
    }

    #[test]
    fn omega_squared_brute_force() {
        // Expand (e12 + e34)^2 by hand: e12∧e34 + e34∧e12 = 2 e1234.
        let (w, _) = make_standard_symplectic(2).unwrap();
        let ww = wedge(&w, &w).unwrap();
        assert_eq!(ww, e(2, &[1, 2, 3, 4]).scale(2.0));
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&e(1, &[1]), &e(1, &[2])).unwrap(), e(1, &[1, 2]));
        assert_eq!(
            wedge(&e(1, &[2]), &e(1, &[1])).unwrap(),
            e(1, &[1, 2]).scale(-1.0)
        );
        let a = &e(2, &[1]) + &e(2, &[3]);
        assert!(wedge(&a, &a).unwrap().is_zero());
        assert!(wedge(&e(1, &[1]), &e(2, &[1])).is_err());
    }

    #[test]
    fn lefschetz_triple_examples() {
        assert_eq!(counting_h(&e(2, &[1])).unwrap(), e(2, &[1]));
        assert_eq!(
            counting_h(&e(2, &[1, 2, 3, 4])).unwrap(),
            e(2, &[1, 2, 3, 4]).scale(-2.0)
        );
        assert!(dual_lefschetz(&PointwiseForm::scalar(2, 1.0))
            .unwrap()
            .is_zero());
        for n in 1..=4 {
            let (w, _) = make_standard_symplectic(n).unwrap();
            assert_eq!(
                dual_lefschetz(&w).unwrap(),
                PointwiseForm::scalar(n, n as f64)
            );
        }
    }

    #[test]
    fn pairing_examples() {
        // ω^{-1} has entry -1 in position (x_1, y_1).
        assert_eq!(pairing(&e(1, &[1]), &e(1, &[2])).unwrap(), -1.0);
        assert_eq!(pairing(&e(1, &[2]), &e(1, &[1])).unwrap(), 1.0);
        assert_eq!(pairing(&e(1, &[1]), &e(1, &[1])).unwrap(), 0.0);
        assert_eq!(
            pairing(
                &PointwiseForm::scalar(1, 1.0),
                &PointwiseForm::scalar(1, 1.0)
            )
            .unwrap(),
            1.0
        );
        // Gram determinant det [[π13, π14], [π23, π24]] = det [[0,0],[0,0]] and
        // (e12, e12) = det [[π11, π12], [π21, π22]] = det [[0,-1],[1,0]] = 1.
        assert_eq!(pairing(&e(2, &[1, 2]), &e(2, &[1, 2])).unwrap(), 1.0);
        assert_eq!(pairing(&e(2, &[1, 3]), &e(2, &[2, 4])).unwrap(), 1.0);
        assert!(pairing(&e(2, &[1]), &e(2, &[1, 2])).is_err());
    }

    #[test]
    fn star_examples() {
        for n in 1..=3 {
            let vol = volume_form(n).unwrap();
            assert_eq!(star(&PointwiseForm::scalar(n, 1.0)).unwrap(), vol);
            let full: Vec<usize> = (1..=2 * n).collect();
            assert_eq!(vol, e(n, &full));
        }
        // 2x2 defining system: ⋆e1 = a e1 + b e2 with ⋆e1∧e1 = (e1,e1) vol = 0
        // and ⋆e1∧e2 = (e1,e2) vol = -vol, so b = 0 and a = -1.
        assert_eq!(star(&e(1, &[1])).unwrap(), e(1, &[1]).scale(-1.0));
    }
}
