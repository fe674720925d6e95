//! Spectral solve of `dg = rhs`, integration, and pairing with test forms.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::{FieldData, FieldForm};
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::exteralg::Op;
use crate::testforms::{complement_sign, TrigForm, TrigTerm};

/// Minimal-norm `g` with `dg = rhs`, solved mode by mode.
///
/// On a mode with (Nyquist-free) frequency vector `m ≠ 0` the operator is
/// `2πi m ∧ ·`, whose pseudo-inverse is `ι_m / (2πi |m|²)`.
pub fn solve_d(rhs: &FieldForm, tol: f64) -> Result<FieldForm> {
    let k = rhs.degree();
    let n = rhs.n();
    if k == 0 {
        return Err(Error::domain("a 0-form is never exact"));
    }
    let scale = 1.0 + rhs.max_abs();
    if k < 2 * n {
        let res = rhs.d()?.sup_norm();
        if res > tol * scale {
            return Err(Error::domain(format!(
                "right-hand side is not closed (|d rhs| = {res:e})"
            )));
        }
    }
    let grid = rhs.grid().clone();
    let nodes = grid.nodes();
    let spec = rhs.spectral();
    let comps = rhs.components();
    let constant = (0..comps)
        .map(|c| spec[c * nodes].norm())
        .fold(0.0, f64::max);
    if constant > tol {
        return Err(Error::NotExact(format!(
            "constant (harmonic) part of size {constant:e}"
        )));
    }
    let alg = rhs.algebra();
    let dm = grid.derivative_tables();
    let ops: Vec<&Op> = (0..2 * n).map(|j| alg.contract_e(k, j)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); alg.size(k - 1) * nodes];
    for (j, op) in ops.iter().enumerate() {
        let len = grid.shape()[j];
        let stride = grid.stride(j);
        for &(r, c, x) in &op.entries {
            for block in (0..nodes).step_by(stride * len) {
                for (i, &m) in dm[j].iter().enumerate() {
                    if m == 0.0 {
                        continue;
                    }
                    let base = block + i * stride;
                    for off in base..base + stride {
                        out[r * nodes + off] += spec[c * nodes + off] * (x * m);
                    }
                }
            }
        }
    }
    let mut unreachable: f64 = 0.0;
    for idx in 0..nodes {
        let mi = grid.multi_index(idx);
        let m2: f64 = mi
            .iter()
            .enumerate()
            .map(|(j, &i)| dm[j][i] * dm[j][i])
            .sum();
        if m2 == 0.0 {
            if idx != 0 {
                for c in 0..comps {
                    unreachable = unreachable.max(spec[c * nodes + idx].norm());
                }
            }
            continue;
        }
        let f = Complex64::new(0.0, -1.0 / (2.0 * PI * m2));
        for r in 0..alg.size(k - 1) {
            out[r * nodes + idx] *= f;
        }
    }
    if unreachable > tol {
        return Err(Error::NotExact(format!(
            "content {unreachable:e} on Nyquist-only modes"
        )));
    }
    let g = rhs.with_data(k - 1, FieldData::Spectral(out));
    Ok(g.into_representation(rhs.representation()))
}

impl FieldForm {
    /// `∫_{T^{2n}} f` for a top-degree field.
    pub fn integrate(&self) -> Result<f64> {
        if self.degree() != 2 * self.n() {
            return Err(Error::domain(format!(
                "integrate needs degree {}, found {}",
                2 * self.n(),
                self.degree()
            )));
        }
        Ok(match &self.data {
            FieldData::Spectral(s) => s[0].re,
            FieldData::Nodal(v) => v.iter().sum::<f64>() / self.nodes() as f64,
        })
    }

    /// The band-limited trigonometric interpolant of the field, keeping
    /// spectral coefficients with modulus above `threshold`.
    pub fn to_trig(&self, threshold: f64) -> TrigForm {
        let grid = self.grid();
        let nodes = self.nodes();
        let spec = self.spectral();
        let basis = self.algebra().basis(self.degree());
        let mut out = TrigForm::zero(2 * self.n(), self.degree());
        for (c, &blade) in basis.iter().enumerate() {
            for idx in 0..nodes {
                let coeff = spec[c * nodes + idx];
                if coeff.norm() <= threshold {
                    continue;
                }
                let mi = grid.multi_index(idx);
                let freq = mi
                    .iter()
                    .zip(grid.shape())
                    .map(|(&i, &s)| Grid::signed_mode(i, s) as f64)
                    .collect();
                out.terms.push(TrigTerm { coeff, freq, blade });
            }
        }
        out
    }

    /// `∫ f ∧ φ` for a periodic test form of complementary degree, computed
    /// from the Fourier coefficients of `f` (exact for band-limited `f`).
    pub fn pair_trig(&self, phi: &TrigForm) -> Result<f64> {
        let n = self.n();
        if phi.ambient != 2 * n {
            return Err(Error::Dimension {
                expected: 2 * n,
                found: phi.ambient,
            });
        }
        if phi.terms.is_empty() {
            return Ok(0.0);
        }
        if self.degree() + phi.degree != 2 * n {
            return Err(Error::domain(format!(
                "degrees {} and {} are not complementary",
                self.degree(),
                phi.degree
            )));
        }
        if !phi.is_periodic() {
            return Err(Error::domain("test form is not periodic"));
        }
        let grid = self.grid();
        let nodes = self.nodes();
        let spec = self.spectral();
        let alg = self.algebra();
        let mut total = 0.0;
        for t in &phi.terms {
            let (comp, sign) = complement_sign(2 * n, t.blade);
            let c = alg.position(comp);
            let mut mi = Vec::with_capacity(2 * n);
            let mut ok = true;
            for (j, &s) in grid.shape().iter().enumerate() {
                match Grid::slot_of(-(t.freq[j].round() as i64), s) {
                    Some(slot) => mi.push(slot),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let coef = spec[c * nodes + grid.linear_index(&mi)];
            total += sign * (t.coeff * coef).re;
        }
        Ok(total)
    }
}
