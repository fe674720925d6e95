//! Real polyhedral chains.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::simplex::Simplex;
use crate::error::{Error, Result};
use crate::exteralg::PointwiseForm;
use crate::testforms::TrigForm;

/// Relative size below which a merged coefficient counts as cancelled.
pub const CANCEL_REL_TOL: f64 = 1e-12;

/// `Σ a_i σ_i` with oriented p-simplices `σ_i` in R^N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainFile", into = "ChainFile")]
pub struct PolyChain {
    ambient: usize,
    dim: usize,
    terms: Vec<(f64, Simplex)>,
}

#[derive(Serialize, Deserialize)]
struct ChainFile {
    #[serde(rename = "N")]
    n: usize,
    p: usize,
    terms: Vec<ChainTerm>,
}

#[derive(Serialize, Deserialize)]
struct ChainTerm {
    c: f64,
    v: Vec<Vec<f64>>,
}

impl TryFrom<ChainFile> for PolyChain {
    type Error = Error;

    fn try_from(f: ChainFile) -> Result<PolyChain> {
        let mut c = PolyChain::new(f.n, f.p);
        for t in f.terms {
            c.push(t.c, Simplex::new(t.v)?)?;
        }
        Ok(c)
    }
}

impl From<PolyChain> for ChainFile {
    fn from(c: PolyChain) -> ChainFile {
        ChainFile {
            n: c.ambient,
            p: c.dim,
            terms: c
                .terms
                .into_iter()
                .map(|(c, s)| ChainTerm {
                    c,
                    v: s.vertices().to_vec(),
                })
                .collect(),
        }
    }
}

/// Result of pushing a chain forward.
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub chain: PolyChain,
    /// Lipschitz constant of the map (exact for affine maps).
    pub lipschitz: f64,
    /// Sampled deviation of the piecewise-linear image from the true image.
    pub hausdorff_error: f64,
}

impl PolyChain {
    pub fn new(ambient: usize, dim: usize) -> PolyChain {
        PolyChain {
            ambient,
            dim,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(ambient: usize, dim: usize, terms: Vec<(f64, Simplex)>) -> Result<PolyChain> {
        let mut c = PolyChain::new(ambient, dim);
        for (a, s) in terms {
            c.push(a, s)?;
        }
        Ok(c)
    }

    /// Single simplex with coefficient one.
    pub fn simplex(s: Simplex) -> PolyChain {
        PolyChain {
            ambient: s.ambient(),
            dim: s.dim(),
            terms: vec![(1.0, s)],
        }
    }

    pub fn push(&mut self, a: f64, s: Simplex) -> Result<()> {
        if s.ambient() != self.ambient {
            return Err(Error::Dimension {
                expected: self.ambient,
                found: s.ambient(),
            });
        }
        if s.dim() != self.dim {
            return Err(Error::Model(format!(
                "{}-simplex in a {}-chain",
                s.dim(),
                self.dim
            )));
        }
        self.terms.push((a, s));
        Ok(())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(f64, Simplex)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: f64) -> PolyChain {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.0 *= s;
        }
        out
    }

    fn check_same(&self, other: &PolyChain) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Dimension {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        if self.dim != other.dim && !self.is_empty() && !other.is_empty() {
            return Err(Error::Model(format!(
                "adding a {}-chain to a {}-chain",
                other.dim, self.dim
            )));
        }
        Ok(())
    }

    /// Formal sum (no merging).
    pub fn add(&self, other: &PolyChain) -> Result<PolyChain> {
        self.check_same(other)?;
        let mut out = self.clone();
        if out.is_empty() {
            out.dim = other.dim;
        }
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn sub(&self, other: &PolyChain) -> Result<PolyChain> {
        self.add(&other.scale(-1.0))
    }

    pub fn translate(&self, v: &[f64]) -> PolyChain {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.1 =
                t.1.map_vertices(|x| x.iter().zip(v).map(|(a, b)| a + b).collect());
        }
        out
    }

    /// Merge simplices with the same vertex set (up to orientation) and drop
    /// cancelled or zero coefficients. Deterministic order of the result.
    pub fn canonicalize(&self) -> PolyChain {
        let mut acc: BTreeMap<Vec<u64>, (f64, f64, Simplex)> = BTreeMap::new();
        for (a, s) in &self.terms {
            if *a == 0.0 {
                continue;
            }
            let (verts, odd) = s.canonical();
            let key: Vec<u64> = verts
                .iter()
                .flatten()
                .map(|x| (x + 0.0).to_bits())
                .collect();
            let a = if odd { -a } else { *a };
            let e = acc
                .entry(key)
                .or_insert_with(|| (0.0, 0.0, Simplex::raw(verts)));
            e.0 += a;
            e.1 += a.abs();
        }
        let terms = acc
            .into_values()
            .filter(|(a, scale, _)| a.abs() > CANCEL_REL_TOL * scale)
            .map(|(a, _, s)| (a, s))
            .collect();
        PolyChain {
            ambient: self.ambient,
            dim: self.dim,
            terms,
        }
    }

    /// Drop pieces whose p-volume is at most `tol`.
    pub fn prune_degenerate(&self, tol: f64) -> PolyChain {
        let mut out = self.clone();
        if self.dim > 0 {
            out.terms.retain(|(_, s)| s.volume() > tol);
        }
        out
    }

    /// `∂ Σ a σ = Σ a Σ_i (-1)^i face_i(σ)`, merged.
    pub fn boundary(&self) -> PolyChain {
        if self.dim == 0 {
            return PolyChain::new(self.ambient, 0);
        }
        let mut out = PolyChain::new(self.ambient, self.dim - 1);
        for (a, s) in &self.terms {
            for i in 0..=self.dim {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                out.terms.push((sign * a, s.face(i)));
            }
        }
        out.canonicalize()
    }

    pub fn mass(&self) -> f64 {
        self.terms.iter().map(|(a, s)| a.abs() * s.volume()).sum()
    }

    /// `M(c) + M(∂c)`.
    pub fn normal_norm(&self) -> f64 {
        let b = if self.dim == 0 {
            0.0
        } else {
            self.boundary().mass()
        };
        self.mass() + b
    }

    /// `Σ a_i ∫_{σ_i} φ`, exact for trigonometric forms.
    pub fn evaluate_trig(&self, phi: &TrigForm) -> Result<f64> {
        if phi.ambient != self.ambient {
            return Err(Error::Dimension {
                expected: self.ambient,
                found: phi.ambient,
            });
        }
        if phi.terms.is_empty() {
            return Ok(0.0);
        }
        if phi.degree != self.dim {
            return Err(Error::domain(format!(
                "{}-form evaluated on a {}-chain",
                phi.degree, self.dim
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|(a, s)| a * phi.integrate_simplex(s.vertices()))
            .sum())
    }

    pub fn evaluate_constant(&self, phi: &PointwiseForm) -> Result<f64> {
        if phi.is_zero() {
            return Ok(0.0);
        }
        self.evaluate_trig(&TrigForm::constant(phi)?)
    }

    /// The box `base + Σ t_i ℓ_i e_{a_i}`, `t ∈ [0,1]^k`, for `sides = [(a_i, ℓ_i)]`,
    /// as its `k!` Kuhn simplices, oriented by the edges `ℓ_i e_{a_i}` in order.
    pub fn coordinate_box(base: &[f64], sides: &[(usize, f64)]) -> Result<PolyChain> {
        let nn = base.len();
        let k = sides.len();
        let mut seen = vec![false; nn];
        for &(a, l) in sides {
            if a >= nn || seen[a] || l == 0.0 {
                return Err(Error::domain(format!(
                    "box side ({a}, {l}) is invalid in R^{nn}"
                )));
            }
            seen[a] = true;
        }
        let mut out = PolyChain::new(nn, k);
        for (sign, perm) in permutations(k) {
            let mut x = base.to_vec();
            let mut verts = vec![x.clone()];
            for &i in &perm {
                x[sides[i].0] += sides[i].1;
                verts.push(x.clone());
            }
            out.push(sign, Simplex::new(verts)?)?;
        }
        Ok(out)
    }

    /// Every p-simplex split into `k^p` congruent pieces (edgewise subdivision).
    pub fn subdivide(&self, k: usize) -> PolyChain {
        if k <= 1 || self.dim == 0 {
            return self.clone();
        }
        let pieces = kuhn_pieces(self.dim, k);
        let mut out = PolyChain::new(self.ambient, self.dim);
        for (a, s) in &self.terms {
            for (sign, params) in &pieces {
                let verts = params.iter().map(|t| kuhn_point(s, t)).collect();
                out.terms.push((a * sign, Simplex::raw(verts)));
            }
        }
        out
    }

    /// Image under `x ↦ A x + b`, with `Lip = ‖A‖₂`.
    pub fn pushforward_affine(&self, a: &DMatrix<f64>, b: &[f64]) -> Result<Pushforward> {
        if a.ncols() != self.ambient || a.nrows() != b.len() {
            return Err(Error::Dimension {
                expected: self.ambient,
                found: a.ncols(),
            });
        }
        let map = |x: &[f64]| -> Vec<f64> {
            (0..a.nrows())
                .map(|i| b[i] + (0..a.ncols()).map(|j| a[(i, j)] * x[j]).sum::<f64>())
                .collect()
        };
        let mut chain = PolyChain::new(a.nrows(), self.dim);
        for (c, s) in &self.terms {
            chain.terms.push((*c, s.map_vertices(map)));
        }
        let lipschitz = if a.is_empty() {
            0.0
        } else {
            a.clone().svd(false, false).singular_values.max()
        };
        let bound = lipschitz.powi(self.dim as i32) * self.mass();
        let m = chain.mass();
        if m > bound * (1.0 + 1e-10) + 1e-14 {
            return Err(Error::Consistency {
                what: "Lipschitz mass bound for an affine pushforward".into(),
                residual: m - bound,
                tol: 1e-10 * bound,
            });
        }
        Ok(Pushforward {
            chain,
            lipschitz,
            hausdorff_error: 0.0,
        })
    }

    /// Piecewise-linear image under a smooth map after `k`-fold subdivision.
    ///
    /// The deviation between `f` and its linear interpolant is sampled at
    /// edge midpoints and barycentres; exceeding `tol` is a refinement error.
    /// `lipschitz` is a sampled lower estimate from the edge stretch factors.
    pub fn pushforward_map<F>(
        &self,
        f: F,
        out_ambient: usize,
        k: usize,
        tol: f64,
    ) -> Result<Pushforward>
    where
        F: Fn(&[f64]) -> Vec<f64>,
    {
        let fine = self.subdivide(k);
        let mut chain = PolyChain::new(out_ambient, self.dim);
        let mut err: f64 = 0.0;
        let mut lip: f64 = 0.0;
        for (c, s) in &fine.terms {
            let img: Vec<Vec<f64>> = s.vertices().iter().map(|v| f(v)).collect();
            if img.iter().any(|v| v.len() != out_ambient) {
                return Err(Error::Dimension {
                    expected: out_ambient,
                    found: img[0].len(),
                });
            }
            let verts = s.vertices();
            let mut probes: Vec<Vec<f64>> = Vec::new();
            for i in 0..verts.len() {
                for j in i + 1..verts.len() {
                    let mut w = vec![0.0; verts.len()];
                    w[i] = 0.5;
                    w[j] = 0.5;
                    probes.push(w);
                    let len = dist(&verts[i], &verts[j]);
                    if len > 0.0 {
                        lip = lip.max(dist(&img[i], &img[j]) / len);
                    }
                }
            }
            if verts.len() > 2 {
                probes.push(vec![1.0 / verts.len() as f64; verts.len()]);
            }
            for w in probes {
                let x = combine(verts, &w);
                let lin = combine(&img, &w);
                err = err.max(dist(&f(&x), &lin));
            }
            chain.terms.push((*c, Simplex::raw(img)));
        }
        if err > tol {
            return Err(Error::Refinement(format!(
                "piecewise-linear image deviates by {err:.3e} > {tol:.3e} at subdivision {k}"
            )));
        }
        Ok(Pushforward {
            chain,
            lipschitz: lip,
            hausdorff_error: err,
        })
    }

    pub fn support(&self) -> SupportSet {
        SupportSet::new(&self.canonicalize())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn read_json<R: Read>(r: R) -> Result<PolyChain> {
        Ok(serde_json::from_reader(r)?)
    }
}

/// `pieces` random p-simplices with coefficients in `[-1, 1]`: a base vertex
/// uniform in `[0, extent]^N` and edges of length at most `spread`, rejecting
/// thin simplices.
pub fn random_chain<R: Rng>(
    rng: &mut R,
    ambient: usize,
    dim: usize,
    pieces: usize,
    extent: f64,
    spread: f64,
) -> PolyChain {
    let mut c = PolyChain::new(ambient, dim);
    while c.len() < pieces {
        let v0: Vec<f64> = (0..ambient)
            .map(|_| rng.random_range(0.0..extent))
            .collect();
        let mut verts = vec![v0.clone()];
        for _ in 0..dim {
            verts.push(
                v0.iter()
                    .map(|x| x + rng.random_range(-spread..spread))
                    .collect(),
            );
        }
        let Ok(s) = Simplex::new(verts) else {
            continue;
        };
        if s.volume() < 1e-3 * spread.powi(dim as i32) {
            continue;
        }
        let a = rng.random_range(-1.0..1.0);
        c.push(a, s).expect("shapes match");
    }
    c
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn combine(verts: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    (0..verts[0].len())
        .map(|i| verts.iter().zip(w).map(|(v, c)| c * v[i]).sum())
        .collect()
}

/// All permutations of `0..k` with their signs.
fn permutations(k: usize) -> Vec<(f64, Vec<usize>)> {
    let mut out: Vec<(f64, Vec<usize>)> = vec![(1.0, Vec::new())];
    for m in 0..k {
        let mut next = Vec::new();
        for (sign, p) in &out {
            for pos in 0..=m {
                let mut q = p.clone();
                q.insert(pos, m);
                let flips = (m - pos) as i32;
                next.push((sign * (-1f64).powi(flips), q));
            }
        }
        out = next;
    }
    out
}

/// Point of `s` with Kuhn coordinates `1 ≥ t_1 ≥ .. ≥ t_p ≥ 0`.
fn kuhn_point(s: &Simplex, t: &[f64]) -> Vec<f64> {
    let v = s.vertices();
    let mut x = v[0].clone();
    for (j, tj) in t.iter().enumerate() {
        for i in 0..x.len() {
            x[i] += tj * (v[j + 1][i] - v[j][i]);
        }
    }
    x
}

/// The `k^p` Kuhn simplices inside `{1 ≥ t_1 ≥ .. ≥ t_p ≥ 0}` with their
/// orientation signs.
fn kuhn_pieces(p: usize, k: usize) -> Vec<(f64, Vec<Vec<f64>>)> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..p {
        let mut next = Vec::new();
        for q in &perms {
            for i in 0..p {
                if !q.contains(&i) {
                    let mut r = q.clone();
                    r.push(i);
                    next.push(r);
                }
            }
        }
        perms = next;
    }
    let mut out = Vec::new();
    let total = k.pow(p as u32);
    for code in 0..total {
        let mut corner = vec![0usize; p];
        let mut c = code;
        for slot in corner.iter_mut() {
            *slot = c % k;
            c /= k;
        }
        for perm in &perms {
            let mut pts = vec![corner.clone()];
            let mut cur = corner.clone();
            for &ax in perm {
                cur[ax] += 1;
                pts.push(cur.clone());
            }
            let centroid: Vec<f64> = (0..p)
                .map(|i| pts.iter().map(|q| q[i] as f64).sum::<f64>() / (p + 1) as f64)
                .collect();
            if centroid.windows(2).any(|w| w[0] <= w[1]) {
                continue;
            }
            let params: Vec<Vec<f64>> = pts
                .iter()
                .map(|q| q.iter().map(|&x| x as f64 / k as f64).collect())
                .collect();
            let e = DMatrix::from_fn(p, p, |i, j| params[j + 1][i] - params[0][i]);
            out.push((e.determinant().signum(), params));
        }
    }
    out
}

/// Union of the simplices of a chain with a Euclidean distance oracle.
#[derive(Clone, Debug)]
pub struct SupportSet {
    simplices: Vec<Simplex>,
    boxes: Vec<(Vec<f64>, Vec<f64>)>,
}

impl SupportSet {
    pub fn new(c: &PolyChain) -> SupportSet {
        let simplices: Vec<Simplex> = c.terms().iter().map(|(_, s)| s.clone()).collect();
        let boxes = simplices
            .iter()
            .map(|s| {
                let n = s.ambient();
                let lo = (0..n)
                    .map(|i| {
                        s.vertices()
                            .iter()
                            .map(|v| v[i])
                            .fold(f64::INFINITY, f64::min)
                    })
                    .collect();
                let hi = (0..n)
                    .map(|i| {
                        s.vertices()
                            .iter()
                            .map(|v| v[i])
                            .fold(f64::NEG_INFINITY, f64::max)
                    })
                    .collect();
                (lo, hi)
            })
            .collect();
        SupportSet { simplices, boxes }
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    /// Vertices of all simplices.
    pub fn points(&self) -> Vec<Vec<f64>> {
        self.simplices
            .iter()
            .flat_map(|s| s.vertices().iter().cloned())
            .collect()
    }

    /// Euclidean distance to the union (infinite when empty).
    pub fn distance(&self, x: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        for (s, (lo, hi)) in self.simplices.iter().zip(&self.boxes) {
            let box_d2: f64 = x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(&xi, (&l, &h))| {
                    let d = (l - xi).max(xi - h).max(0.0);
                    d * d
                })
                .sum();
            if box_d2.sqrt() >= best {
                continue;
            }
            best = best.min(s.closest_point(x).0);
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: &[f64], b: &[f64]) -> Simplex {
        Simplex::new(vec![a.to_vec(), b.to_vec()]).unwrap()
    }

    #[test]
    fn boundary_of_segment_and_square() {
        let c = PolyChain::simplex(seg(&[0.0, 0.0], &[1.0, 0.0]));
        let b = c.boundary();
        assert_eq!(b.len(), 2);
        assert_eq!(
            b.evaluate_constant(&PointwiseForm::scalar(1, 1.0)).unwrap(),
            0.0
        );
        let sq = unit_square();
        let b = sq.boundary();
        assert_eq!(b.len(), 4);
        assert!((b.mass() - 4.0).abs() < 1e-15);
        assert!((sq.normal_norm() - 5.0).abs() < 1e-15);
        assert!(b.boundary().is_empty());
    }

    fn unit_square() -> PolyChain {
        let t1 = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let t2 = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        PolyChain::from_terms(2, 2, vec![(1.0, t1), (1.0, t2)]).unwrap()
    }

    #[test]
    fn subdivision_preserves_evaluation_and_mass() {
        let sq = unit_square();
        for k in 1..4 {
            let f = sq.subdivide(k);
            assert_eq!(f.len(), 2 * k * k);
            assert!((f.mass() - 1.0).abs() < 1e-14);
            let vol = PointwiseForm::basis(1, &[1, 2]).unwrap();
            assert!((f.evaluate_constant(&vol).unwrap() - 1.0).abs() < 1e-14);
            assert!((f.boundary().mass() - 4.0).abs() < 1e-12);
        }
        let tet = Simplex::new(vec![
            vec![0.0, 0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.3, 1.0, 0.0, 0.0],
            vec![0.2, 0.1, 1.0, 0.0],
        ])
        .unwrap();
        let c = PolyChain::simplex(tet.clone()).subdivide(3);
        assert_eq!(c.len(), 27);
        assert!((c.mass() - tet.volume()).abs() < 1e-14);
        let vol = PointwiseForm::basis(2, &[1, 2, 3]).unwrap();
        let whole = PolyChain::simplex(tet).evaluate_constant(&vol).unwrap();
        assert!((c.evaluate_constant(&vol).unwrap() - whole).abs() < 1e-14);
    }

    #[test]
    fn support_and_cancellation() {
        let c = PolyChain::simplex(seg(&[0.0, 0.0], &[1.0, 0.0]));
        let s = c.support();
        assert_eq!(s.distance(&[0.5, 0.0]), 0.0);
        assert!((s.distance(&[0.5, 0.25]) - 0.25).abs() < 1e-15);
        assert!(c.sub(&c).unwrap().support().is_empty());
        let rev = PolyChain::simplex(seg(&[1.0, 0.0], &[0.0, 0.0]));
        assert!(c.add(&rev).unwrap().canonicalize().is_empty());
    }

    #[test]
    fn affine_pushforward_scaling() {
        let sq = unit_square();
        let a = DMatrix::from_diagonal_element(2, 2, 3.0);
        let p = sq.pushforward_affine(&a, &[0.5, 0.5]).unwrap();
        assert!((p.lipschitz - 3.0).abs() < 1e-14);
        assert!((p.chain.mass() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_pushforward_needs_refinement() {
        let c = PolyChain::simplex(seg(&[0.0, 0.0], &[1.0, 0.0]));
        let f = |x: &[f64]| vec![x[0], (std::f64::consts::PI * x[0]).sin()];
        assert!(matches!(
            c.pushforward_map(f, 2, 1, 1e-3),
            Err(Error::Refinement(_))
        ));
        let p = c.pushforward_map(f, 2, 64, 1e-3).unwrap();
        assert!(p.hausdorff_error < 1e-3);
        // Arc length of the sine arch.
        assert!((p.chain.mass() - 2.30489).abs() < 1e-3);
    }

    #[test]
    fn json_round_trip() {
        let sq = unit_square();
        let mut buf = Vec::new();
        sq.write_json(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"N\""));
        assert_eq!(PolyChain::read_json(&buf[..]).unwrap(), sq);
    }

    #[test]
    fn coordinate_box_is_oriented() {
        let b =
            PolyChain::coordinate_box(&[0.1, 0.2, 0.3], &[(0, 0.5), (2, 0.25), (1, 2.0)]).unwrap();
        assert_eq!(b.len(), 6);
        assert!((b.mass() - 0.25).abs() < 1e-14);
        // Edges 0.5 e_0, 0.25 e_2, 2 e_1 span -0.25 e_012.
        for (a, s) in b.terms() {
            assert!((a * s.edges().determinant() + 0.25).abs() < 1e-14);
        }
        let flipped = PolyChain::coordinate_box(&[0.0, 0.0], &[(0, -1.0), (1, 1.0)]).unwrap();
        assert!((flipped.mass() - 1.0).abs() < 1e-14);
        for (a, s) in flipped.terms() {
            assert!((a * s.edges().determinant() + 1.0).abs() < 1e-14);
        }
        assert!(PolyChain::coordinate_box(&[0.0, 0.0], &[(0, 1.0), (0, 1.0)]).is_err());
    }
}
