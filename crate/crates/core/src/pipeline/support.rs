//! Support descriptors of fields: empty balls and the support of the
//! Lefschetz components of `B`.

use serde::{Deserialize, Serialize};

use crate::chains::PolyChain;
use crate::error::{Error, Result};
use crate::torusfields::{FieldForm, Grid, TorusBox};

/// A closed `ℓ∞` ball of grid nodes on which a field is pointwise below `tol`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmptyBall {
    pub center: Vec<f64>,
    pub radius: f64,
    pub radius_cells: usize,
    /// Largest nodal norm inside the ball.
    pub max_norm: f64,
    pub tol: f64,
}

/// Largest node-centered `ℓ∞` ball of nodes where the coefficient norm of
/// `f` (an upper bound for its comass) is at most `tol`.
pub fn largest_empty_ball(f: &FieldForm, tol: f64) -> Option<EmptyBall> {
    let grid = f.grid();
    let norms = f.node_norms();
    let mut mask: Vec<bool> = norms.iter().map(|&v| v <= tol).collect();
    let first = mask.iter().position(|&b| b)?;
    let mut best = (0usize, first);
    let max_r = grid.shape().iter().map(|&s| s / 2).min().unwrap_or(0);
    for r in 1..=max_r {
        mask = erode(grid, &mask);
        match mask.iter().position(|&b| b) {
            Some(idx) => best = (r, idx),
            None => break,
        }
    }
    let (r, idx) = best;
    let max_norm = ball_nodes(grid, idx, r)
        .iter()
        .map(|&j| norms[j])
        .fold(0.0, f64::max);
    let h = (0..grid.axes())
        .map(|j| grid.spacing(j))
        .fold(f64::INFINITY, f64::min);
    Some(EmptyBall {
        center: grid.coords(idx),
        radius: r as f64 * h,
        radius_cells: r,
        max_norm,
        tol,
    })
}

/// Erosion by the unit `ℓ∞` cube, axis by axis, periodic.
fn erode(grid: &Grid, mask: &[bool]) -> Vec<bool> {
    let mut cur = mask.to_vec();
    for j in 0..grid.axes() {
        let len = grid.shape()[j];
        let stride = grid.stride(j);
        let mut next = cur.clone();
        for (idx, slot) in next.iter_mut().enumerate() {
            if !*slot {
                continue;
            }
            let i = (idx / stride) % len;
            let base = idx - i * stride;
            let lo = base + ((i + len - 1) % len) * stride;
            let hi = base + ((i + 1) % len) * stride;
            *slot = cur[lo] && cur[hi];
        }
        cur = next;
    }
    cur
}

fn ball_nodes(grid: &Grid, center: usize, r: usize) -> Vec<usize> {
    let c = grid.multi_index(center);
    let shape = grid.shape();
    let mut out = vec![center];
    for (j, &len) in shape.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (2 * r + 1));
        for &idx in &out {
            let mi = grid.multi_index(idx);
            for d in 0..=2 * r {
                let mut m = mi.clone();
                m[j] = (c[j] + len + d - r) % len;
                next.push(grid.linear_index(&m));
            }
        }
        next.sort_unstable();
        next.dedup();
        out = next;
    }
    out
}

/// Axis-aligned bounding boxes of the simplices of `c`, widened by `margin`.
pub fn chain_boxes(c: &PolyChain, margin: f64) -> Vec<TorusBox> {
    c.terms()
        .iter()
        .map(|(_, s)| {
            let v = s.vertices();
            let lo = (0..c.ambient())
                .map(|j| v.iter().map(|x| x[j]).fold(f64::INFINITY, f64::min) - margin)
                .collect();
            let hi = (0..c.ambient())
                .map(|j| v.iter().map(|x| x[j]).fold(f64::NEG_INFINITY, f64::max) + margin)
                .collect();
            TorusBox { lo, hi }
        })
        .collect()
}

/// Support of one Lefschetz component of `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSupport {
    pub r: usize,
    pub degree: usize,
    pub sup_norm: f64,
    /// Largest nodal norm outside the allowed region.
    pub leak: f64,
    pub witness: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BSupportReport {
    pub components: Vec<ComponentSupport>,
    /// `max |B - Σ L^r/r! B_r|`.
    pub reconstruction: f64,
    pub tol: f64,
    pub passed: bool,
}

/// `B = Σ_r L^r/r! B_r` with primitive `B_r`, and the nodes where each
/// `B_r` exceeds `tol·(1 + |B|_∞)` checked to lie in `region`.
pub fn lefschetz_decompose_b(
    b: &FieldForm,
    region: &[TorusBox],
    tol: f64,
) -> Result<(Vec<(usize, FieldForm)>, BSupportReport)> {
    let comps = b.lefschetz_decompose();
    let grid = b.grid();
    let scale = 1.0 + b.max_abs();
    let mut recon = FieldForm::zeros(b.n(), grid, b.degree())?;
    let mut support = Vec::with_capacity(comps.len());
    for (r, beta) in &comps {
        let fact: f64 = (1..=*r).map(|i| i as f64).product();
        recon = recon.add(&beta.lefschetz_l_pow(*r)?.scale(1.0 / fact))?;
        let norms = beta.node_norms();
        let mut leak: f64 = 0.0;
        let mut witness = None;
        for (idx, &v) in norms.iter().enumerate() {
            if v <= tol * scale || v <= leak {
                continue;
            }
            let x = grid.coords(idx);
            if !region.iter().any(|bx| bx.depth(&x) > 0.0) {
                leak = v;
                witness = Some(x);
            }
        }
        support.push(ComponentSupport {
            r: *r,
            degree: beta.degree(),
            sup_norm: norms.iter().copied().fold(0.0, f64::max),
            leak,
            witness,
        });
    }
    let reconstruction = recon.max_diff(b)?;
    let passed = reconstruction <= 1e-10 * scale && support.iter().all(|c| c.witness.is_none());
    Ok((
        comps,
        BSupportReport {
            components: support,
            reconstruction,
            tol,
            passed,
        },
    ))
}

impl BSupportReport {
    /// The first leaking component as a support violation.
    pub fn check(&self) -> Result<()> {
        if let Some(c) = self.components.iter().find(|c| c.witness.is_some()) {
            return Err(Error::SupportViolation(format!(
                "component r = {} has norm {:e} at {:?}, outside the allowed region",
                c.r,
                c.leak,
                c.witness.as_deref().unwrap_or_default()
            )));
        }
        if !self.passed {
            return Err(Error::Consistency {
                what: "Lefschetz reconstruction of B".into(),
                residual: self.reconstruction,
                tol: 1e-10,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exteralg::PointwiseForm;

    fn bump(x: &[f64], c: &[f64], r: f64) -> f64 {
        let s: f64 = x
            .iter()
            .zip(c)
            .map(|(a, b)| {
                let d = (a - b).rem_euclid(1.0);
                let d = d.min(1.0 - d) / r;
                d * d
            })
            .sum();
        if s < 1.0 {
            (-1.0 / (1.0 - s)).exp()
        } else {
            0.0
        }
    }

    #[test]
    fn empty_ball_in_a_band() {
        let grid = Grid::uniform(2, 32).unwrap();
        let f = FieldForm::from_fn(1, &grid, 0, |x| {
            let d = (x[1] - 0.25).abs();
            vec![if d < 0.3 { 1.0 } else { 0.0 }]
        })
        .unwrap();
        let ball = largest_empty_ball(&f, 1e-8).unwrap();
        // Rows y = 18/32 .. 31/32 vanish: 14 rows, radius 6.
        assert_eq!(ball.radius_cells, 6);
        assert_eq!(ball.max_norm, 0.0);
        let y = ball.center[1];
        assert!(
            (y - 0.75).abs() < 1e-12 || (y - 0.78125).abs() < 1e-12,
            "{y}"
        );
        let full = FieldForm::constant(&grid, 0, &PointwiseForm::scalar(1, 1.0)).unwrap();
        assert!(largest_empty_ball(&full, 1e-8).is_none());
    }

    #[test]
    fn synthetic_b_components_stay_in_the_ball() {
        let grid = Grid::uniform(4, 16).unwrap();
        let c = [0.5, 0.5, 0.5, 0.5];
        let beta = FieldForm::from_fn(2, &grid, 1, |x| {
            let b = bump(x, &c, 0.3);
            vec![b, -0.5 * b, 0.0, 2.0 * b]
        })
        .unwrap();
        let b = beta.lefschetz_l().unwrap();
        let region = vec![TorusBox {
            lo: vec![0.2; 4],
            hi: vec![0.8; 4],
        }];
        let (comps, rep) = lefschetz_decompose_b(&b, &region, 1e-12).unwrap();
        rep.check().unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].0, 1);
        assert!(comps[0].1.max_diff(&beta).unwrap() < 1e-12);
        let tight = vec![TorusBox {
            lo: vec![0.4; 4],
            hi: vec![0.6; 4],
        }];
        let (_, rep) = lefschetz_decompose_b(&b, &tight, 1e-12).unwrap();
        assert!(matches!(rep.check(), Err(Error::SupportViolation(_))));
    }

    #[test]
    fn zero_b_is_vacuous() {
        let grid = Grid::uniform(4, 4).unwrap();
        let b = FieldForm::zeros(2, &grid, 1).unwrap();
        let (_, rep) = lefschetz_decompose_b(&b, &[], 1e-8).unwrap();
        assert!(rep.passed);
        assert!(rep.components.iter().all(|c| c.sup_norm == 0.0));
    }
}
