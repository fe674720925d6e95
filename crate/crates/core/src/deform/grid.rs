//! The shifted cubical grid and its faces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scale `ε`, generic shift and optional period lattice of the cubical grid
/// `offset + ε Z^N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(rename = "N")]
    pub ambient: usize,
    pub epsilon: f64,
    pub offset: Vec<f64>,
    /// Diagonal period lattice (torus mode); each period a multiple of `ε`.
    #[serde(default)]
    pub period: Option<Vec<f64>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_retries")]
    pub max_retries: usize,
    /// Axes whose offset is kept when the offset is resampled.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pinned: Vec<usize>,
}

fn default_retries() -> usize {
    8
}

impl GridSpec {
    pub fn new(ambient: usize, epsilon: f64) -> Result<GridSpec> {
        let g = GridSpec {
            ambient,
            epsilon,
            offset: vec![0.0; ambient],
            period: None,
            seed: 0,
            max_retries: default_retries(),
            pinned: Vec::new(),
        };
        g.validate()?;
        Ok(g)
    }

    /// Grid with an offset drawn from `seed`.
    pub fn seeded(ambient: usize, epsilon: f64, seed: u64) -> Result<GridSpec> {
        let mut g = GridSpec::new(ambient, epsilon)?;
        g.seed = seed;
        g.offset = g.draw_offset(0);
        Ok(g)
    }

    pub fn with_offset(mut self, offset: Vec<f64>) -> Result<GridSpec> {
        self.offset = offset;
        self.validate()?;
        Ok(self)
    }

    pub fn with_period(mut self, period: Vec<f64>) -> Result<GridSpec> {
        self.period = Some(period);
        self.validate()?;
        Ok(self)
    }

    pub fn with_pinned(mut self, axes: Vec<usize>) -> Result<GridSpec> {
        self.pinned = axes;
        self.validate()?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> GridSpec {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.ambient == 0 {
            return Err(Error::domain("grid in R^0"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::domain(format!(
                "grid scale {} is not positive",
                self.epsilon
            )));
        }
        if self.offset.len() != self.ambient {
            return Err(Error::Dimension {
                expected: self.ambient,
                found: self.offset.len(),
            });
        }
        if let Some(o) = self
            .offset
            .iter()
            .find(|&&o| !(0.0..self.epsilon).contains(&o))
        {
            return Err(Error::domain(format!(
                "offset component {o} outside [0, ε)"
            )));
        }
        if let Some(&j) = self.pinned.iter().find(|&&j| j >= self.ambient) {
            return Err(Error::domain(format!(
                "pinned axis {j} outside 0..{}",
                self.ambient
            )));
        }
        if let Some(per) = &self.period {
            if per.len() != self.ambient {
                return Err(Error::Dimension {
                    expected: self.ambient,
                    found: per.len(),
                });
            }
            for &l in per {
                let m = (l / self.epsilon).round();
                if m < 1.0 || (l - m * self.epsilon).abs() > 1e-9 * l {
                    return Err(Error::domain(format!(
                        "period {l} is not a multiple of ε = {}",
                        self.epsilon
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    /// `2Nε`.
    pub fn support_bound(&self) -> f64 {
        2.0 * self.ambient as f64 * self.epsilon
    }

    /// Coordinate of grid line `k` on axis `j`.
    pub fn line(&self, j: usize, k: i64) -> f64 {
        self.offset[j] + k as f64 * self.epsilon
    }

    /// Index of the grid slab `[line(k), line(k + 1))` containing `x`.
    pub fn cell_index(&self, j: usize, x: f64) -> i64 {
        ((x - self.offset[j]) / self.epsilon).floor() as i64
    }

    pub(crate) fn draw_offset(&self, attempt: u64) -> Vec<f64> {
        let mut rng =
            ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
        let mut out: Vec<f64> = (0..self.ambient)
            .map(|_| rng.random_range(0.0..self.epsilon))
            .collect();
        for &j in &self.pinned {
            out[j] = self.offset[j];
        }
        out
    }

    /// Grid lines per period on axis `j`.
    fn cells_per_period(&self, j: usize) -> Option<i64> {
        self.period
            .as_ref()
            .map(|p| (p[j] / self.epsilon).round() as i64)
    }

    /// Euclidean distance, or flat-torus distance in periodic mode.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(j, (x, y))| {
                let mut d = (x - y).abs();
                if let Some(per) = &self.period {
                    d = d.rem_euclid(per[j]);
                    d = d.min(per[j] - d);
                }
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Lattice translates of `x` that can come within `reach` of the box
    /// `[lo, hi]` (just `x` itself outside periodic mode).
    pub(crate) fn translates(
        &self,
        x: &[f64],
        lo: &[f64],
        hi: &[f64],
        reach: f64,
    ) -> Vec<Vec<f64>> {
        let Some(per) = &self.period else {
            return vec![x.to_vec()];
        };
        let mut out = vec![Vec::with_capacity(x.len())];
        for j in 0..x.len() {
            let kmin = ((lo[j] - reach - x[j]) / per[j]).ceil() as i64;
            let kmax = ((hi[j] + reach - x[j]) / per[j]).floor() as i64;
            let mut next = Vec::new();
            for head in &out {
                for k in kmin..=kmax {
                    let mut h: Vec<f64> = head.clone();
                    h.push(x[j] + k as f64 * per[j]);
                    next.push(h);
                }
            }
            out = next;
        }
        out
    }
}

/// A closed grid face: axes in `free` span cells `[line(z), line(z+1)]`,
/// the others sit on grid lines `line(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Face {
    pub free: u32,
    pub idx: Vec<i64>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.free.count_ones() as usize
    }

    pub fn is_free(&self, j: usize) -> bool {
        self.free & (1 << j) != 0
    }

    pub fn free_axes(&self) -> Vec<usize> {
        (0..self.idx.len()).filter(|&j| self.is_free(j)).collect()
    }

    pub fn center(&self, g: &GridSpec) -> Vec<f64> {
        (0..self.idx.len())
            .map(|j| {
                let x = g.line(j, self.idx[j]);
                if self.is_free(j) {
                    x + 0.5 * g.epsilon
                } else {
                    x
                }
            })
            .collect()
    }

    /// Lowest corner of the face.
    pub fn corner(&self, g: &GridSpec) -> Vec<f64> {
        (0..self.idx.len())
            .map(|j| g.line(j, self.idx[j]))
            .collect()
    }

    /// The representative in the fundamental domain and the translation that
    /// takes this face onto it.
    pub fn normalized(&self, g: &GridSpec) -> (Face, Vec<f64>) {
        let mut idx = self.idx.clone();
        let mut shift = vec![0.0; idx.len()];
        for j in 0..idx.len() {
            if let (Some(m), Some(per)) = (g.cells_per_period(j), &g.period) {
                let k = idx[j].rem_euclid(m);
                shift[j] = ((k - idx[j]) / m) as f64 * per[j];
                idx[j] = k;
            }
        }
        (
            Face {
                free: self.free,
                idx,
            },
            shift,
        )
    }
}

/// Geometric tolerances attached to one grid and one input scale.
pub(crate) struct Cells<'a> {
    pub g: &'a GridSpec,
    /// Snapping distance onto grid lines.
    pub tol: f64,
}

impl<'a> Cells<'a> {
    pub fn new(g: &'a GridSpec, coord_scale: f64) -> Cells<'a> {
        let tol =
            1e-12 * (g.epsilon + coord_scale + g.offset.iter().fold(0.0f64, |a, b| a.max(b.abs())));
        Cells { g, tol }
    }

    /// Cut a piece along every grid line crossing its interior on the axes
    /// in `axes`.
    pub fn split_cells(
        &self,
        verts: Vec<Vec<f64>>,
        k: usize,
        axes: &[usize],
    ) -> Vec<Vec<Vec<f64>>> {
        let mut pieces = vec![verts];
        for &j in axes {
            let mut next = Vec::new();
            for piece in pieces {
                let lo = piece.iter().map(|v| v[j]).fold(f64::INFINITY, f64::min);
                let hi = piece.iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max);
                let mut rest = Some(piece);
                let first = self.g.cell_index(j, lo + self.tol) + 1;
                let mut line = first;
                while let Some(cur) = rest.take() {
                    let x = self.g.line(j, line);
                    if x >= hi - self.tol {
                        next.push(cur);
                        break;
                    }
                    let s: Vec<f64> = cur.iter().map(|v| v[j] - x).collect();
                    let (up, down) = split(&cur, k, &s, self.tol);
                    if let Some(d) = down {
                        next.push(d);
                    }
                    rest = up;
                    line += 1;
                }
            }
            pieces = next;
        }
        pieces
    }

    /// Smallest face containing the piece, found among the free axes of
    /// `within` (all axes when `None`). Coordinates on grid lines are snapped.
    pub fn classify(&self, verts: &mut [Vec<f64>], within: Option<&Face>) -> Face {
        let n = self.g.ambient;
        let mut face = within.cloned().unwrap_or(Face {
            free: (1u32 << n) - 1,
            idx: vec![0; n],
        });
        for j in 0..n {
            if within.is_some() && !face.is_free(j) {
                continue;
            }
            let k = ((verts[0][j] - self.g.offset[j]) / self.g.epsilon).round() as i64;
            let x = self.g.line(j, k);
            if verts.iter().all(|v| (v[j] - x).abs() <= self.tol) {
                verts.iter_mut().for_each(|v| v[j] = x);
                face.free &= !(1 << j);
                face.idx[j] = k;
            } else {
                let lo = verts.iter().map(|v| v[j]).fold(f64::INFINITY, f64::min);
                let hi = verts.iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max);
                face.free |= 1 << j;
                face.idx[j] = self.g.cell_index(j, 0.5 * (lo + hi));
            }
        }
        face
    }
}

/// Split a point, segment or convex polygon (cyclic order) by the sign of the
/// affine function with vertex values `s`. Returns the `s ≥ 0` and `s ≤ 0`
/// parts; a piece inside the level set belongs to both.
pub(crate) fn split(
    verts: &[Vec<f64>],
    k: usize,
    s: &[f64],
    tol: f64,
) -> (Option<Vec<Vec<f64>>>, Option<Vec<Vec<f64>>>) {
    let class = |x: f64| {
        if x > tol {
            1
        } else if x < -tol {
            -1
        } else {
            0
        }
    };
    let cut = |a: &[f64], b: &[f64], sa: f64, sb: f64| -> Vec<f64> {
        let t = sa / (sa - sb);
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };
    match k {
        0 => {
            let c = class(s[0]);
            let v = verts.to_vec();
            ((c >= 0).then(|| v.clone()), (c <= 0).then_some(v))
        }
        1 => {
            let (ca, cb) = (class(s[0]), class(s[1]));
            if ca * cb < 0 {
                let x = cut(&verts[0], &verts[1], s[0], s[1]);
                let first = vec![verts[0].clone(), x.clone()];
                let second = vec![x, verts[1].clone()];
                if ca > 0 {
                    (Some(first), Some(second))
                } else {
                    (Some(second), Some(first))
                }
            } else {
                let pos = (ca >= 0 && cb >= 0).then(|| verts.to_vec());
                let neg = (ca <= 0 && cb <= 0).then(|| verts.to_vec());
                (pos, neg)
            }
        }
        _ => {
            let m = verts.len();
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for i in 0..m {
                let j = (i + 1) % m;
                let (ci, cj) = (class(s[i]), class(s[j]));
                if ci >= 0 {
                    pos.push(verts[i].clone());
                }
                if ci <= 0 {
                    neg.push(verts[i].clone());
                }
                if ci * cj < 0 {
                    let x = cut(&verts[i], &verts[j], s[i], s[j]);
                    pos.push(x.clone());
                    neg.push(x);
                }
            }
            (
                (pos.len() >= 3).then_some(pos),
                (neg.len() >= 3).then_some(neg),
            )
        }
    }
}

/// Fan triangulation of a polygon piece (`k = 2`) into index triples; other
/// pieces are already simplices.
pub(crate) fn fan(len: usize, k: usize) -> Vec<Vec<usize>> {
    if k != 2 {
        return vec![(0..len).collect()];
    }
    (1..len - 1).map(|i| vec![0, i, i + 1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_split_shares_the_cut() {
        let tri = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]];
        let s: Vec<f64> = tri.iter().map(|v| v[0] - 1.0).collect();
        let (pos, neg) = split(&tri, 2, &s, 1e-12);
        let (pos, neg) = (pos.unwrap(), neg.unwrap());
        assert_eq!(pos.len(), 3);
        assert_eq!(neg.len(), 4);
        for x in &pos {
            if x[0] == 1.0 {
                assert!(neg.contains(x));
            }
        }
    }

    #[test]
    fn cells_and_faces() {
        let g = GridSpec::new(2, 0.5)
            .unwrap()
            .with_offset(vec![0.1, 0.2])
            .unwrap();
        let c = Cells::new(&g, 1.0);
        let seg = vec![vec![0.0, 0.3], vec![1.3, 0.3]];
        let parts = c.split_cells(seg, 1, &[0, 1]);
        assert_eq!(parts.len(), 4);
        let mut v = vec![vec![0.6, 0.3], vec![0.6, 0.7]];
        let f = c.classify(&mut v, None);
        assert_eq!(f.dim(), 1);
        assert!(!f.is_free(0) && f.idx[0] == 1);
        assert_eq!(f.idx[1], 0);
    }

    #[test]
    fn torus_distance_and_normalization() {
        let g = GridSpec::new(2, 0.25)
            .unwrap()
            .with_period(vec![1.0, 1.0])
            .unwrap();
        assert!((g.distance(&[0.05, 0.0], &[0.95, 0.0]) - 0.1).abs() < 1e-12);
        let f = Face {
            free: 1,
            idx: vec![5, -1],
        };
        let (h, shift) = f.normalized(&g);
        assert_eq!(h.idx, vec![1, 3]);
        assert_eq!(shift, vec![-1.0, 1.0]);
        assert!(GridSpec::new(2, 0.3)
            .unwrap()
            .with_period(vec![1.0, 1.0])
            .is_err());
    }
}
