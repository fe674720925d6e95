//! Deformation of polyhedral chains onto the skeleton of a cubical grid.
//!
//! Each piece of the chain lying in the interior of a `q`-face is pushed
//! radially from the face center onto the face boundary, for `q = N` down to
//! `p + 1`. Inside the cone over one facet the radial map is projective, so
//! simplices go to simplices and the straight-line homotopy sweeps a
//! frustum, recorded as the prism chain `Σ (-1)^i [v_0..v_i, w_i..w_p]`.
//! With `X' = h(X)` one has `X = X' - ∂H(X) - H(∂X)`; the boundary `∂T` is
//! carried along separately so that `T = P + ∂R + S` with `R` the sum of the
//! `-H(X)` and `S` the sum of the `-H(∂X)`.

mod certificate;
mod grid;
#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::chains::{PolyChain, Simplex, CANCEL_REL_TOL};
use crate::error::{Error, Result};
use grid::{fan, split, Cells, Face};

pub use certificate::{
    certify, identity_residual, skeletal_defect, verify_certificate, Certificate, SupportCheck,
    IDENTITY_TOL, SKELETAL_TOL, SUPPORT_SLACK,
};
pub use grid::GridSpec;

/// Largest chain dimension handled (pieces are points, segments or convex
/// polygons).
pub const MAX_CHAIN_DIM: usize = 2;

/// Smallest admissible `ℓ∞` distance, in half-cells, between a piece and the
/// center it is projected from.
pub const CENTER_CLEARANCE: f64 = 1e-6;

const GAUGE_TOL: f64 = 1e-12;

/// Relative volume below which an output simplex is dropped as degenerate.
const DROP_TOL: f64 = 1e-14;

/// `T = P + ∂R + S` on one grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeformResult {
    /// The grid actually used (after any offset resampling).
    pub grid: GridSpec,
    #[serde(rename = "P")]
    pub p: PolyChain,
    #[serde(rename = "R")]
    pub r: PolyChain,
    #[serde(rename = "S")]
    pub s: PolyChain,
    /// Offset resamples caused by pieces passing through a center.
    pub retries: usize,
    pub certificate: Certificate,
}

#[derive(Clone, Debug)]
struct Piece {
    coeff: f64,
    verts: Vec<Vec<f64>>,
    face: Face,
}

/// Deform `t` onto the `p`-skeleton of the grid `g`.
pub fn deform(t: &PolyChain, g: &GridSpec) -> Result<DeformResult> {
    g.validate()?;
    let n = g.ambient;
    let p = t.dim();
    if t.ambient() != n {
        return Err(Error::Dimension {
            expected: n,
            found: t.ambient(),
        });
    }
    if p >= n {
        return Err(Error::domain(format!("cannot deform a {p}-chain in R^{n}")));
    }
    if p > MAX_CHAIN_DIM {
        return Err(Error::Unsupported(format!(
            "chains of dimension {p} > {MAX_CHAIN_DIM}"
        )));
    }
    let mut last = String::new();
    for attempt in 0..=g.max_retries {
        let grid = if attempt == 0 {
            g.clone()
        } else {
            let mut h = g.clone();
            h.offset = g.draw_offset(attempt as u64);
            h
        };
        match deform_on(t, &grid) {
            Ok((pc, rc, sc)) => {
                let certificate = certify(t, &grid, &pc, &rc, &sc, grid.seed)?;
                return Ok(DeformResult {
                    grid,
                    p: pc,
                    r: rc,
                    s: sc,
                    retries: attempt,
                    certificate,
                });
            }
            Err(Error::Degenerate(msg)) => last = msg,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate(format!(
        "{last} (after {} offset resamples)",
        g.max_retries
    )))
}

fn deform_on(t: &PolyChain, g: &GridSpec) -> Result<(PolyChain, PolyChain, PolyChain)> {
    let n = g.ambient;
    let p = t.dim();
    let scale = t
        .terms()
        .iter()
        .flat_map(|(_, s)| s.vertices().iter().flatten())
        .fold(0.0f64, |a, x| a.max(x.abs()));
    let cells = Cells::new(g, scale);
    let boundary = t.boundary();
    let mut x = pieces_of(&cells, t);
    let mut y = pieces_of(&cells, &boundary);
    let mut r_out = Vec::new();
    let mut s_out = Vec::new();
    for q in (p + 1..=n).rev() {
        x = project(&cells, x, q, p, &mut r_out)?;
        if p > 0 {
            y = project(&cells, y, q, p - 1, &mut s_out)?;
        }
    }
    let pc = skeleton_chain(&cells, x, &y, p);
    let rc = assemble(g, r_out, p + 1);
    let sc = assemble(g, s_out, p);
    Ok((pc, rc, sc))
}

/// Cut the simplices of a chain into pieces lying in single closed cells.
fn pieces_of(cells: &Cells, c: &PolyChain) -> Vec<Piece> {
    let k = c.dim();
    let axes: Vec<usize> = (0..cells.g.ambient).collect();
    let mut out = Vec::new();
    for (a, s) in c.terms() {
        for mut verts in cells.split_cells(s.vertices().to_vec(), k, &axes) {
            let face = cells.classify(&mut verts, None);
            if face.dim() >= k {
                out.push(Piece {
                    coeff: *a,
                    verts,
                    face,
                });
            }
        }
    }
    out
}

/// One radial projection step on every piece whose smallest face has
/// dimension `q`. Prism chains `-coeff · H(piece)` go to `homotopy`.
fn project(
    cells: &Cells,
    pieces: Vec<Piece>,
    q: usize,
    k: usize,
    homotopy: &mut Vec<Piece>,
) -> Result<Vec<Piece>> {
    let g = cells.g;
    let half = 0.5 * g.epsilon;
    let mut out = Vec::with_capacity(pieces.len());
    for pc in pieces {
        if pc.face.dim() != q {
            out.push(pc);
            continue;
        }
        let c = pc.face.center(g);
        let axes = pc.face.free_axes();
        // Region 2m is the cone over the upper facet of axis axes[m], 2m + 1
        // the lower one; the gauge is the ℓ∞ norm in half-cells.
        let gauge = |r: usize, v: &[f64]| {
            let d = (v[axes[r / 2]] - c[axes[r / 2]]) / half;
            if r % 2 == 0 {
                d
            } else {
                -d
            }
        };
        for r in 0..2 * q {
            let Some(region) = clip_region(&pc.verts, k, r, 2 * q, &gauge) else {
                continue;
            };
            let clearance = region
                .iter()
                .map(|v| gauge(r, v))
                .fold(f64::INFINITY, f64::min);
            if clearance < CENTER_CLEARANCE {
                return Err(Error::Degenerate(format!(
                    "a {k}-piece passes within {clearance:e} half-cells of the center {c:?}"
                )));
            }
            let j = axes[r / 2];
            let line = if r % 2 == 0 {
                pc.face.idx[j] + 1
            } else {
                pc.face.idx[j]
            };
            let bound = g.line(j, line);
            let mut img: Vec<Vec<f64>> = region
                .iter()
                .map(|v| {
                    let mu = gauge(r, v);
                    let mut w: Vec<f64> = c
                        .iter()
                        .zip(v)
                        .map(|(ci, vi)| ci + (vi - ci) / mu)
                        .collect();
                    w[j] = bound;
                    w
                })
                .collect();
            let mut facet = pc.face.clone();
            facet.free &= !(1 << j);
            facet.idx[j] = line;
            let face = cells.classify(&mut img, Some(&facet));
            for tri in fan(region.len(), k) {
                for i in 0..=k {
                    let mut verts: Vec<Vec<f64>> =
                        tri[..=i].iter().map(|&a| region[a].clone()).collect();
                    verts.extend(tri[i..].iter().map(|&a| img[a].clone()));
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    homotopy.push(Piece {
                        coeff: -sign * pc.coeff,
                        verts,
                        face: pc.face.clone(),
                    });
                }
            }
            if face.dim() >= k {
                out.push(Piece {
                    coeff: pc.coeff,
                    verts: img,
                    face,
                });
            }
        }
    }
    Ok(out)
}

/// Part of a piece in the cone region `r` among `regions`. A piece inside a
/// region wall goes to the lower-numbered region.
fn clip_region<F>(
    verts: &[Vec<f64>],
    k: usize,
    r: usize,
    regions: usize,
    gauge: &F,
) -> Option<Vec<Vec<f64>>>
where
    F: Fn(usize, &[f64]) -> f64,
{
    let mut cur = verts.to_vec();
    for other in 0..regions {
        if other == r {
            continue;
        }
        let s: Vec<f64> = cur.iter().map(|v| gauge(r, v) - gauge(other, v)).collect();
        if s.iter().all(|x| x.abs() <= GAUGE_TOL) {
            if r < other {
                continue;
            }
            return None;
        }
        cur = split(&cur, k, &s, GAUGE_TOL).0?;
    }
    Some(cur)
}

fn shifted(g: &GridSpec, pc: &Piece) -> (Face, Vec<Vec<f64>>) {
    let (face, shift) = pc.face.normalized(g);
    let verts = pc
        .verts
        .iter()
        .map(|v| v.iter().zip(&shift).map(|(a, b)| a + b).collect())
        .collect();
    (face, verts)
}

/// Simplices of pieces (fan-triangulated, moved to the fundamental domain),
/// without degenerate ones.
fn assemble(g: &GridSpec, pieces: Vec<Piece>, dim: usize) -> PolyChain {
    let mut c = PolyChain::new(g.ambient, dim);
    let min_vol = DROP_TOL * g.epsilon.powi(dim as i32);
    for pc in &pieces {
        let (_, verts) = shifted(g, pc);
        for tri in fan(verts.len(), dim) {
            let s = Simplex::from_vertices(tri.iter().map(|&i| verts[i].clone()).collect())
                .expect("pieces have consistent shapes");
            if dim == 0 || s.volume() > min_vol {
                c.push(pc.coeff, s).expect("dimension checked");
            }
        }
    }
    c.canonicalize()
}

/// The skeletal chain `P`. On a `p`-face whose interior meets no boundary
/// piece the current is a constant multiple of the face, and is written so.
fn skeleton_chain(cells: &Cells, x: Vec<Piece>, y: &[Piece], p: usize) -> PolyChain {
    let g = cells.g;
    let busy: BTreeSet<Face> = y
        .iter()
        .filter(|pc| pc.face.dim() == p)
        .map(|pc| pc.face.normalized(g).0)
        .collect();
    let mut by_face: BTreeMap<Face, Vec<Piece>> = BTreeMap::new();
    for pc in x {
        if pc.face.dim() != p {
            continue;
        }
        let (face, verts) = shifted(g, &pc);
        by_face.entry(face.clone()).or_default().push(Piece {
            coeff: pc.coeff,
            verts,
            face,
        });
    }
    let mut kept = Vec::new();
    let mut out = PolyChain::new(g.ambient, p);
    for (face, pieces) in by_face {
        if busy.contains(&face) {
            kept.extend(pieces);
            continue;
        }
        let axes = face.free_axes();
        let unit = g.epsilon.powi(p as i32);
        let (mut total, mut scale) = (0.0, 0.0);
        for pc in &pieces {
            let v = signed_volume(&pc.verts, &axes) / unit;
            total += pc.coeff * v;
            scale += (pc.coeff * v).abs();
        }
        if total.abs() <= CANCEL_REL_TOL * scale {
            continue;
        }
        for s in face_simplices(g, &face) {
            out.push(total, s).expect("dimension checked");
        }
    }
    let rest = assemble(
        &GridSpec {
            period: None,
            ..g.clone()
        },
        kept,
        p,
    );
    out.add(&rest).expect("same shape").canonicalize()
}

/// Oriented `k`-volume of a piece measured in the coordinates `axes`.
fn signed_volume(verts: &[Vec<f64>], axes: &[usize]) -> f64 {
    match axes.len() {
        0 => 1.0,
        1 => verts[1][axes[0]] - verts[0][axes[0]],
        _ => {
            let (a, b) = (axes[0], axes[1]);
            let m = verts.len();
            0.5 * (0..m)
                .map(|i| {
                    let (u, v) = (&verts[i], &verts[(i + 1) % m]);
                    u[a] * v[b] - v[a] * u[b]
                })
                .sum::<f64>()
        }
    }
}

/// The face as positively oriented simplices (at most two free axes).
fn face_simplices(g: &GridSpec, face: &Face) -> Vec<Simplex> {
    let x0 = face.corner(g);
    let step = |v: &[f64], j: usize| {
        let mut w = v.to_vec();
        w[j] += g.epsilon;
        w
    };
    let axes = face.free_axes();
    let raw = match axes.len() {
        0 => vec![vec![x0]],
        1 => vec![vec![x0.clone(), step(&x0, axes[0])]],
        _ => {
            let (a, b) = (axes[0], axes[1]);
            let xa = step(&x0, a);
            let xab = step(&xa, b);
            let xb = step(&x0, b);
            vec![vec![x0.clone(), xa, xab.clone()], vec![x0, xab, xb]]
        }
    };
    raw.into_iter()
        .map(|v| Simplex::from_vertices(v).expect("grid face"))
        .collect()
}
