//! Periodic node grids on the unit torus.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node counts per axis of a periodic grid on `[0, 1)^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    shape: Vec<usize>,
    strides: Vec<usize>,
    nodes: usize,
}

impl Grid {
    pub fn new(shape: &[usize]) -> Result<Grid> {
        if shape.is_empty() {
            return Err(Error::domain("grid needs at least one axis"));
        }
        if shape.iter().any(|&s| s < 2 || !s.is_power_of_two()) {
            return Err(Error::domain(format!(
                "grid sizes must be powers of two >= 2, got {shape:?}"
            )));
        }
        let mut strides = vec![1; shape.len()];
        for a in (0..shape.len() - 1).rev() {
            strides[a] = strides[a + 1] * shape[a + 1];
        }
        Ok(Grid {
            shape: shape.to_vec(),
            strides,
            nodes: shape.iter().product(),
        })
    }

    pub fn uniform(axes: usize, size: usize) -> Result<Grid> {
        Grid::new(&vec![size; axes])
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn axes(&self) -> usize {
        self.shape.len()
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    /// Per-axis index of a linear node index (last axis fastest).
    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes()];
        for a in (0..self.axes()).rev() {
            out[a] = idx % self.shape[a];
            idx /= self.shape[a];
        }
        out
    }

    pub fn linear_index(&self, mi: &[usize]) -> usize {
        mi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx)
            .iter()
            .zip(&self.shape)
            .map(|(&i, &n)| i as f64 / n as f64)
            .collect()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        1.0 / self.shape[axis] as f64
    }

    /// Signed frequency of FFT slot `i` on an axis of `n` nodes; the Nyquist
    /// slot maps to `n/2`.
    pub fn signed_mode(i: usize, n: usize) -> i64 {
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    pub fn is_nyquist(i: usize, n: usize) -> bool {
        i == n / 2
    }

    /// Frequency used for differentiation: Nyquist slots differentiate to 0.
    pub fn derivative_mode(i: usize, n: usize) -> f64 {
        if Self::is_nyquist(i, n) {
            0.0
        } else {
            Self::signed_mode(i, n) as f64
        }
    }

    /// Per-axis tables of `derivative_mode` for every slot.
    pub fn derivative_tables(&self) -> Vec<Vec<f64>> {
        self.shape
            .iter()
            .map(|&n| (0..n).map(|i| Self::derivative_mode(i, n)).collect())
            .collect()
    }

    /// FFT slot holding signed frequency `m`, if it is resolved (|m| < n/2).
    pub fn slot_of(m: i64, n: usize) -> Option<usize> {
        let h = (n / 2) as i64;
        if m.abs() >= h {
            return None;
        }
        Some(if m >= 0 {
            m as usize
        } else {
            (m + n as i64) as usize
        })
    }
}
