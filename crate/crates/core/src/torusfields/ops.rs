//! Differential and pointwise operators on fields.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::field::{FieldData, FieldForm};
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::exteralg::blade::wedge_sign;
use crate::exteralg::{self, Op, PointwiseForm};

/// Tolerance for the agreement of the two definitions of `d^Λ`.
pub const DLAMBDA_AGREEMENT_TOL: f64 = 1e-8;

/// `out[r] += Σ_j w_j(mode) Σ_{(r,c,x) ∈ ops[j]} x in[c]` on spectral data,
/// where `w_j` depends only on the slot index along axis `j`.
fn axis_symbol_apply(
    grid: &Grid,
    input: &[Complex64],
    ops: &[&Op],
    rows: usize,
    weight: impl Fn(usize, usize) -> Complex64,
) -> Vec<Complex64> {
    let nodes = grid.nodes();
    let mut out = vec![Complex64::new(0.0, 0.0); rows * nodes];
    for (j, op) in ops.iter().enumerate() {
        let len = grid.shape()[j];
        let stride = grid.stride(j);
        let table: Vec<Complex64> = (0..len).map(|i| weight(j, i)).collect();
        for &(r, c, x) in &op.entries {
            let src = &input[c * nodes..(c + 1) * nodes];
            let dst = &mut out[r * nodes..(r + 1) * nodes];
            for block in (0..nodes).step_by(stride * len) {
                for (i, t) in table.iter().enumerate() {
                    let f = t * x;
                    if f == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let base = block + i * stride;
                    for off in base..base + stride {
                        dst[off] += src[off] * f;
                    }
                }
            }
        }
    }
    out
}

fn keep_repr(template: &FieldForm, degree: usize, spec: Vec<Complex64>) -> FieldForm {
    let f = template.with_data(degree, FieldData::Spectral(spec));
    f.into_representation(template.representation())
}

impl FieldForm {
    /// Exterior derivative by spectral differentiation.
    pub fn d(&self) -> Result<FieldForm> {
        let k = self.degree();
        let dim = 2 * self.n();
        if k >= dim {
            return Err(Error::domain(
                "d of a top-degree field has no target degree",
            ));
        }
        let alg = self.algebra();
        let ops: Vec<&Op> = (0..dim).map(|j| alg.wedge_e(k, j)).collect();
        let dm = self.grid().derivative_tables();
        let spec = self.spectral();
        let out = axis_symbol_apply(self.grid(), &spec, &ops, alg.size(k + 1), |j, i| {
            Complex64::new(0.0, 2.0 * PI * dm[j][i])
        });
        Ok(keep_repr(self, k + 1, out))
    }

    pub fn lefschetz_l(&self) -> Result<FieldForm> {
        let k = self.degree();
        if k + 2 > 2 * self.n() {
            return Err(Error::domain("L overflows the top degree"));
        }
        Ok(self.apply_op(self.algebra().l(k), k + 2))
    }

    pub fn lefschetz_l_pow(&self, r: usize) -> Result<FieldForm> {
        let k = self.degree();
        if k + 2 * r > 2 * self.n() {
            return Err(Error::domain("L^r overflows the top degree"));
        }
        let mut f = self.clone();
        for _ in 0..r {
            f = f.lefschetz_l()?;
        }
        Ok(f)
    }

    /// `Λ`; on degrees 0 and 1 the result is the zero field of degree 0.
    pub fn dual_lefschetz(&self) -> FieldForm {
        let k = self.degree();
        if k < 2 {
            let z = FieldForm::zeros(self.n(), self.grid(), 0).expect("valid layout");
            return z.into_representation(self.representation());
        }
        self.apply_op(self.algebra().lambda(k), k - 2)
    }

    pub fn counting_h(&self) -> FieldForm {
        let k = self.degree();
        self.scale(self.n() as f64 - k as f64)
    }

    pub fn star(&self) -> FieldForm {
        let k = self.degree();
        self.apply_op(self.algebra().star(k), 2 * self.n() - k)
    }

    /// `a ∧ f` for a constant homogeneous form `a`.
    pub fn wedge_const(&self, a: &PointwiseForm) -> Result<FieldForm> {
        if a.n() != self.n() {
            return Err(Error::Dimension {
                expected: self.n(),
                found: a.n(),
            });
        }
        let ka = a.homogeneous_degree()?.unwrap_or(0);
        let k = self.degree();
        if k + ka > 2 * self.n() {
            return Err(Error::domain("wedge overflows the top degree"));
        }
        let alg = self.algebra();
        let mut m = DMatrix::zeros(alg.size(k + ka), alg.size(k));
        for (c, bc) in alg.basis(k).iter().enumerate() {
            for (ba, x) in a.terms() {
                let s = wedge_sign(ba, *bc);
                if s != 0 {
                    let r = alg.position(crate::exteralg::Blade(ba.0 | bc.0));
                    m[(r, c)] += x * s as f64;
                }
            }
        }
        Ok(self.apply_op(&op_from(m), k + ka))
    }

    /// Symplectic adjoint `d^Λ = (-1)^{k+1} ⋆ d ⋆`, cross-checked against
    /// `dΛ - Λd`; disagreement beyond [`DLAMBDA_AGREEMENT_TOL`] is an error.
    pub fn dlambda(&self) -> Result<FieldForm> {
        let k = self.degree();
        if k == 0 {
            return Err(Error::domain("d^Λ of a 0-form has no target degree"));
        }
        let spec = self.to_spectral();
        let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let via_star = spec.star().d()?.star().scale(sign);
        let d_lam = if k >= 2 {
            Some(spec.dual_lefschetz().d()?)
        } else {
            None
        };
        let lam_d = if k < 2 * self.n() {
            Some(spec.d()?.dual_lefschetz())
        } else {
            None
        };
        let via_commutator = match (d_lam, lam_d) {
            (Some(a), Some(b)) if a.degree() == b.degree() => a.sub(&b)?,
            (Some(a), _) => a,
            (None, Some(b)) if b.degree() == k - 1 => b.scale(-1.0),
            _ => via_star.scale(0.0),
        };
        let residual = via_star.max_diff(&via_commutator)?;
        let scale = 1.0 + via_star.max_abs();
        if residual > DLAMBDA_AGREEMENT_TOL * scale {
            return Err(Error::Consistency {
                what: "(-1)^{k+1} ⋆d⋆ versus dΛ - Λd".into(),
                residual,
                tol: DLAMBDA_AGREEMENT_TOL * scale,
            });
        }
        Ok(via_star.into_representation(self.representation()))
    }

    /// `dd^Λ` (degree preserving).
    pub fn ddlambda(&self) -> Result<FieldForm> {
        self.dlambda()?.d()
    }

    /// `‖df‖_∞ ≤ tol` and `‖d^Λ f‖_∞ ≤ tol` (vacuous parts skipped at the
    /// extreme degrees).
    pub fn is_harmonic(&self, tol: f64) -> Result<bool> {
        let k = self.degree();
        if k < 2 * self.n() && self.d()?.sup_norm() > tol {
            return Ok(false);
        }
        if k > 0 && self.dlambda()?.sup_norm() > tol {
            return Ok(false);
        }
        Ok(true)
    }

    /// Nodewise Lefschetz decomposition: `(r, β_{k-2r})` fields.
    pub fn lefschetz_decompose(&self) -> Vec<(usize, FieldForm)> {
        let k = self.degree();
        self.algebra()
            .decomposition(k)
            .iter()
            .map(|b| (b.r, self.apply_op(&b.proj, k - 2 * b.r)))
            .collect()
    }

    /// Nodewise inverse of `L^k` from degree `n + k` to `n - k`.
    pub fn invert_l_power(&self, k: usize) -> Result<FieldForm> {
        let n = self.n();
        if k > n || self.degree() != n + k {
            return Err(Error::domain(format!(
                "inverting L^{k} needs degree {}, found {}",
                n + k,
                self.degree()
            )));
        }
        Ok(self.apply_op(self.algebra().inv_l_pow(k), n - k))
    }

    /// Per-node primitivity; both criteria are evaluated at every node.
    pub fn primitive_mask(&self, tol: f64) -> Result<Vec<bool>> {
        let n = self.n();
        let k = self.degree();
        if k > n {
            return Err(Error::domain(format!(
                "primitivity is defined for degree <= n, got {k}"
            )));
        }
        let by_lambda = self.dual_lefschetz().node_norms();
        let pow = n - k + 1;
        let by_power = if k + 2 * pow <= 2 * n {
            self.lefschetz_l_pow(pow)?.node_norms()
        } else {
            vec![0.0; self.nodes()]
        };
        let mut out = Vec::with_capacity(self.nodes());
        for (a, b) in by_lambda.iter().zip(&by_power) {
            let p = *a <= tol;
            if p != (*b <= tol) {
                let (lo, hi) = if a < b { (*a, *b) } else { (*b, *a) };
                if lo <= 1e-3 * tol && hi > 1e3 * tol {
                    return Err(Error::Consistency {
                        what: "Λf = 0 versus ω^{n-k+1} ∧ f = 0".into(),
                        residual: hi,
                        tol,
                    });
                }
            }
            out.push(p);
        }
        Ok(out)
    }

    /// `f ∧ g` for two fields. The product is formed on a grid of twice the
    /// size per axis, which resolves every product mode of two band-limited
    /// inputs, then truncated back.
    pub fn wedge(&self, other: &FieldForm) -> Result<FieldForm> {
        if self.n() != other.n() || self.grid() != other.grid() {
            return Err(Error::domain("fields live on different grids"));
        }
        let (ka, kb) = (self.degree(), other.degree());
        if ka + kb > 2 * self.n() {
            return Err(Error::domain("wedge overflows the top degree"));
        }
        let alg = self.algebra();
        let fine_shape: Vec<usize> = self.grid().shape().iter().map(|s| 2 * s).collect();
        let fine = Grid::new(&fine_shape)?;
        let up = |f: &FieldForm| -> Vec<f64> {
            let spec = f.spectral();
            let comps = f.components();
            let mut big = vec![Complex64::new(0.0, 0.0); comps * fine.nodes()];
            for c in 0..comps {
                for idx in 0..f.nodes() {
                    let mi = f.grid().multi_index(idx);
                    let fm: Vec<usize> = mi
                        .iter()
                        .zip(f.grid().shape())
                        .zip(&fine_shape)
                        .map(|((&i, &n), &nf)| {
                            let m = Grid::signed_mode(i, n);
                            if m >= 0 {
                                m as usize
                            } else {
                                (m + nf as i64) as usize
                            }
                        })
                        .collect();
                    big[c * fine.nodes() + fine.linear_index(&fm)] = spec[c * f.nodes() + idx];
                }
            }
            super::fft::inverse_components(&fine, &big)
        };
        let (a, b) = (up(self), up(other));
        let fnodes = fine.nodes();
        let mut prod = vec![0.0; alg.size(ka + kb) * fnodes];
        for (ia, ba) in alg.basis(ka).iter().enumerate() {
            for (ib, bb) in alg.basis(kb).iter().enumerate() {
                let s = wedge_sign(*ba, *bb);
                if s == 0 {
                    continue;
                }
                let r = alg.position(crate::exteralg::Blade(ba.0 | bb.0));
                let (sa, sb) = (
                    &a[ia * fnodes..(ia + 1) * fnodes],
                    &b[ib * fnodes..(ib + 1) * fnodes],
                );
                for ((o, x), y) in prod[r * fnodes..(r + 1) * fnodes]
                    .iter_mut()
                    .zip(sa)
                    .zip(sb)
                {
                    *o += s as f64 * x * y;
                }
            }
        }
        let big = super::fft::forward_components(&fine, &prod);
        let comps = alg.size(ka + kb);
        let nodes = self.nodes();
        let mut spec = vec![Complex64::new(0.0, 0.0); comps * nodes];
        for c in 0..comps {
            for idx in 0..nodes {
                let mi = self.grid().multi_index(idx);
                let mut fm = Vec::with_capacity(mi.len());
                let mut keep = true;
                for ((&i, &n), &nf) in mi.iter().zip(self.grid().shape()).zip(&fine_shape) {
                    if Grid::is_nyquist(i, n) {
                        keep = false;
                    }
                    let m = Grid::signed_mode(i, n);
                    fm.push(if m >= 0 {
                        m as usize
                    } else {
                        (m + nf as i64) as usize
                    });
                }
                if keep {
                    spec[c * nodes + idx] = big[c * fnodes + fine.linear_index(&fm)];
                }
            }
        }
        let out = self.with_data(ka + kb, FieldData::Spectral(spec));
        Ok(out.into_representation(self.representation()))
    }

    /// Zero all modes outside `|m_j| < N_j/2`, including Nyquist slots.
    pub fn band_limit(&self) -> FieldForm {
        let mut spec = self.spectral().into_owned();
        let nodes = self.nodes();
        for idx in 0..nodes {
            let mi = self.grid().multi_index(idx);
            if mi
                .iter()
                .zip(self.grid().shape())
                .any(|(&i, &n)| Grid::is_nyquist(i, n))
            {
                for c in 0..self.components() {
                    spec[c * nodes + idx] = Complex64::new(0.0, 0.0);
                }
            }
        }
        keep_repr(self, self.degree(), spec)
    }
}

pub(crate) fn op_from(m: DMatrix<f64>) -> Op {
    let mut entries = Vec::new();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            if m[(r, c)] != 0.0 {
                entries.push((r, c, m[(r, c)]));
            }
        }
    }
    Op { mat: m, entries }
}

/// Pointwise operators that lift to fields node by node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointwiseOp {
    L,
    Lambda,
    H,
    Star,
    Decompose,
    InvertLPower(usize),
    IsPrimitive(f64),
}

#[derive(Clone, Debug)]
pub enum Lifted {
    Field(FieldForm),
    Components(Vec<(usize, FieldForm)>),
    Mask(Vec<bool>),
}

/// Apply a pointwise operator at every node of `f`.
pub fn lift_pointwise(op: PointwiseOp, f: &FieldForm) -> Result<Lifted> {
    Ok(match op {
        PointwiseOp::L => Lifted::Field(f.lefschetz_l()?),
        PointwiseOp::Lambda => Lifted::Field(f.dual_lefschetz()),
        PointwiseOp::H => Lifted::Field(f.counting_h()),
        PointwiseOp::Star => Lifted::Field(f.star()),
        PointwiseOp::Decompose => Lifted::Components(f.lefschetz_decompose()),
        PointwiseOp::InvertLPower(k) => Lifted::Field(f.invert_l_power(k)?),
        PointwiseOp::IsPrimitive(tol) => Lifted::Mask(f.primitive_mask(tol)?),
    })
}

/// Pointwise reference check used in tests: the lifted operator agrees with
/// the sparse pointwise one at node `idx`.
pub fn pointwise_reference(op: PointwiseOp, f: &FieldForm, idx: usize) -> Result<PointwiseForm> {
    let a = f.value_at_node(idx);
    match op {
        PointwiseOp::L => exteralg::lefschetz_l(&a),
        PointwiseOp::Lambda => exteralg::dual_lefschetz(&a),
        PointwiseOp::H => exteralg::counting_h(&a),
        PointwiseOp::Star => exteralg::star(&a),
        PointwiseOp::InvertLPower(k) => exteralg::invert_l_power(k, &a),
        _ => Err(Error::domain("operator has no single-form reference")),
    }
}
