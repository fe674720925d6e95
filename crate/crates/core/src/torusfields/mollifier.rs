//! Tensor-product mollifiers on the periodic grid.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{FieldData, FieldForm};
use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MollifierProfile {
    /// `exp(-1/(1 - s²))` for `|s| < 1`, `s = t/width`.
    Bump,
    /// `exp(-(c s)²/2)` for `|s| < 1`.
    TruncatedGaussian { sharpness: f64 },
}

/// A compactly supported, discretely normalized convolution kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mollifier {
    width: f64,
    profile: MollifierProfile,
}

impl Mollifier {
    pub fn new(width: f64, profile: MollifierProfile) -> Result<Mollifier> {
        if !(width > 0.0 && width < 0.5) {
            return Err(Error::domain(format!(
                "mollifier width {width} outside (0, 1/2)"
            )));
        }
        if let MollifierProfile::TruncatedGaussian { sharpness } = profile {
            if !(sharpness > 0.0) {
                return Err(Error::domain("Gaussian sharpness must be positive"));
            }
        }
        Ok(Mollifier { width, profile })
    }

    pub fn bump(width: f64) -> Result<Mollifier> {
        Mollifier::new(width, MollifierProfile::Bump)
    }

    pub fn truncated_gaussian(width: f64, sharpness: f64) -> Result<Mollifier> {
        Mollifier::new(width, MollifierProfile::TruncatedGaussian { sharpness })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn profile(&self) -> MollifierProfile {
        self.profile
    }

    /// Unnormalized one-dimensional profile at offset `t`.
    pub fn profile_value(&self, t: f64) -> f64 {
        let s = t / self.width;
        if s.abs() >= 1.0 {
            return 0.0;
        }
        match self.profile {
            MollifierProfile::Bump => (-1.0 / (1.0 - s * s)).exp(),
            MollifierProfile::TruncatedGaussian { sharpness } => {
                (-0.5 * (sharpness * s).powi(2)).exp()
            }
        }
    }

    /// Discrete weights per slot of an axis with `n` nodes (slot `i` is the
    /// periodic offset `i/n`), summing to one.
    pub fn weights_1d(&self, n: usize) -> Vec<f64> {
        let mut w: Vec<f64> = (0..n)
            .map(|i| self.profile_value(Grid::signed_mode(i, n) as f64 / n as f64))
            .collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        w
    }

    /// Fourier multiplier per FFT slot of an axis with `n` nodes.
    pub fn symbol_1d(&self, n: usize) -> Vec<f64> {
        let w = self.weights_1d(n);
        (0..n)
            .map(|slot| {
                let m = Grid::signed_mode(slot, n) as f64;
                w.iter()
                    .enumerate()
                    .map(|(i, wi)| {
                        let t = Grid::signed_mode(i, n) as f64 / n as f64;
                        wi * (2.0 * std::f64::consts::PI * m * t).cos()
                    })
                    .sum()
            })
            .collect()
    }

    /// Total discrete integral of the kernel on `grid` (one by construction).
    pub fn total_integral(&self, grid: &Grid) -> f64 {
        grid.shape()
            .iter()
            .map(|&n| self.weights_1d(n).iter().sum::<f64>())
            .product()
    }

    /// Symbol of the tensor kernel at a signed integer frequency.
    pub fn symbol_at(&self, grid: &Grid, m: &[i64]) -> f64 {
        let mut s = 1.0;
        for (j, &n) in grid.shape().iter().enumerate() {
            match Grid::slot_of(m[j], n) {
                Some(slot) => s *= self.symbol_1d(n)[slot],
                None => return 0.0,
            }
        }
        s
    }

    /// Convolve a field with the kernel.
    pub fn smooth_field(&self, f: &FieldForm) -> FieldForm {
        let tables: Vec<Vec<f64>> = f
            .grid()
            .shape()
            .iter()
            .map(|&n| self.symbol_1d(n))
            .collect();
        let mut spec = f.spectral().into_owned();
        multiply_tensor_symbol(f.grid(), &mut spec, &tables);
        let out = f.with_data(f.degree(), FieldData::Spectral(spec));
        out.into_representation(f.representation())
    }
}

/// Multiply component-major spectral data by `Π_j tables[j][slot_j]`.
pub(crate) fn multiply_tensor_symbol(grid: &Grid, spec: &mut [Complex64], tables: &[Vec<f64>]) {
    let nodes = grid.nodes();
    let mut sym = vec![1.0; nodes];
    for (j, table) in tables.iter().enumerate() {
        let len = grid.shape()[j];
        let stride = grid.stride(j);
        for block in (0..nodes).step_by(stride * len) {
            for (i, t) in table.iter().enumerate() {
                let base = block + i * stride;
                sym[base..base + stride].iter_mut().for_each(|s| *s *= t);
            }
        }
    }
    for chunk in spec.chunks_mut(nodes) {
        for (v, s) in chunk.iter_mut().zip(&sym) {
            *v *= *s;
        }
    }
}

/// Axis-aligned box on the torus, `lo ≤ x < hi` with `hi - lo < 1` per axis
/// (coordinates taken modulo 1 relative to `lo`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl TorusBox {
    /// `ℓ∞` distance from `x` to the complement of the box (≤ 0 outside).
    pub fn depth(&self, x: &[f64]) -> f64 {
        let mut d = f64::INFINITY;
        for j in 0..x.len() {
            let lo = self.lo[j];
            let hi = self.hi[j];
            if hi - lo >= 1.0 {
                continue;
            }
            let u = lo + (x[j] - lo).rem_euclid(1.0);
            d = d.min((u - lo).min(hi - u));
            if u >= hi {
                return -(u - hi).min(lo + 1.0 - u);
            }
        }
        d
    }
}
