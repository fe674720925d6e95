//! Oriented simplices in R^N.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degeneracy threshold on the p-volume of a validated simplex.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// `[v_0, .., v_p]`; the vertex order fixes the orientation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

impl Simplex {
    /// Validated constructor: equal ambient dimensions and non-degenerate.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Simplex> {
        let s = Simplex::from_vertices(vertices)?;
        if s.dim() > 0 && s.volume() <= DEGENERACY_TOL {
            return Err(Error::Model(format!("degenerate {}-simplex", s.dim())));
        }
        Ok(s)
    }

    /// Constructor that only checks shapes; used for pieces that may be thin.
    pub fn from_vertices(vertices: Vec<Vec<f64>>) -> Result<Simplex> {
        let Some(first) = vertices.first() else {
            return Err(Error::Model("simplex without vertices".into()));
        };
        let n = first.len();
        if vertices.iter().any(|v| v.len() != n) {
            return Err(Error::Model(
                "vertices of different ambient dimension".into(),
            ));
        }
        if vertices.len() > n + 1 {
            return Err(Error::Model(format!(
                "{} vertices in R^{n}",
                vertices.len()
            )));
        }
        Ok(Simplex { vertices })
    }

    pub(crate) fn raw(vertices: Vec<Vec<f64>>) -> Simplex {
        Simplex { vertices }
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.vertices[0].len()
    }

    /// Edge vectors `v_i - v_0` as columns.
    pub fn edges(&self) -> DMatrix<f64> {
        let v0 = &self.vertices[0];
        DMatrix::from_fn(self.ambient(), self.dim(), |i, j| {
            self.vertices[j + 1][i] - v0[i]
        })
    }

    /// Euclidean p-volume via the Gram determinant.
    pub fn volume(&self) -> f64 {
        let p = self.dim();
        if p == 0 {
            return 1.0;
        }
        let e = self.edges();
        let g = e.transpose() * &e;
        let fact: f64 = (1..=p).map(|i| i as f64).product();
        g.determinant().max(0.0).sqrt() / fact
    }

    /// Face opposite vertex `i`.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.vertices.clone();
        v.remove(i);
        Simplex { vertices: v }
    }

    pub fn centroid(&self) -> Vec<f64> {
        let m = self.vertices.len() as f64;
        (0..self.ambient())
            .map(|i| self.vertices.iter().map(|v| v[i]).sum::<f64>() / m)
            .collect()
    }

    pub fn map_vertices<F: Fn(&[f64]) -> Vec<f64>>(&self, f: F) -> Simplex {
        Simplex {
            vertices: self.vertices.iter().map(|v| f(v)).collect(),
        }
    }

    /// Euclidean distance from `x` to the simplex, with the closest point.
    pub fn closest_point(&self, x: &[f64]) -> (f64, Vec<f64>) {
        closest(&self.vertices, x)
    }

    /// Sorted vertex list and the parity of the sorting permutation.
    pub(crate) fn canonical(&self) -> (Vec<Vec<f64>>, bool) {
        let mut idx: Vec<usize> = (0..self.vertices.len()).collect();
        idx.sort_by(|&a, &b| {
            self.vertices[a]
                .iter()
                .zip(&self.vertices[b])
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut seen = vec![false; idx.len()];
        let mut odd = false;
        for start in 0..idx.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = idx[j];
                len += 1;
            }
            if len % 2 == 0 {
                odd = !odd;
            }
        }
        (idx.iter().map(|&i| self.vertices[i].clone()).collect(), odd)
    }
}

fn closest(verts: &[Vec<f64>], x: &[f64]) -> (f64, Vec<f64>) {
    let dist = |p: &[f64]| {
        p.iter()
            .zip(x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    };
    if verts.len() == 1 {
        return (dist(&verts[0]), verts[0].clone());
    }
    let n = x.len();
    let p = verts.len() - 1;
    let v0 = &verts[0];
    let e = DMatrix::from_fn(n, p, |i, j| verts[j + 1][i] - v0[i]);
    let r = nalgebra::DVector::from_fn(n, |i, _| x[i] - v0[i]);
    let g = e.transpose() * &e;
    if let Some(lam) = g.clone().lu().solve(&(e.transpose() * r)) {
        let sum: f64 = lam.iter().sum();
        if lam.iter().all(|&l| l >= 0.0) && sum <= 1.0 {
            let q: Vec<f64> = (0..n)
                .map(|i| v0[i] + (0..p).map(|j| e[(i, j)] * lam[j]).sum::<f64>())
                .collect();
            return (dist(&q), q);
        }
    }
    let mut best = (f64::INFINITY, Vec::new());
    for skip in 0..verts.len() {
        let sub: Vec<Vec<f64>> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, v)| v.clone())
            .collect();
        let c = closest(&sub, x);
        if c.0 < best.0 {
            best = c;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes_and_distance() {
        let s = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(s.volume(), 1.0);
        assert_eq!(s.closest_point(&[0.5, 0.0]).0, 0.0);
        assert!((s.closest_point(&[0.5, 0.7]).0 - 0.7).abs() < 1e-15);
        assert!((s.closest_point(&[2.0, 0.0]).0 - 1.0).abs() < 1e-15);
        let t = Simplex::new(vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!((t.volume() - 0.5).abs() < 1e-15);
        assert!((t.closest_point(&[0.2, 0.2, 0.3]).0 - 0.3).abs() < 1e-15);
        assert!(Simplex::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn canonical_parity() {
        let s = Simplex::raw(vec![vec![1.0], vec![0.0]]);
        let (v, odd) = s.canonical();
        assert_eq!(v, vec![vec![0.0], vec![1.0]]);
        assert!(odd);
    }
}
