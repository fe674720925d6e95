//! Fourier coefficients of chain currents and their mollification.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::field::{FieldData, FieldForm};
use super::grid::Grid;
use super::mollifier::{multiply_tensor_symbol, Mollifier, TorusBox};
use crate::chains::{CurrentRep, PolyChain, WedgeFactor};
use crate::error::{Error, Result};
use crate::exteralg::blade::{blades_of_grade, wedge_sign, Blade};
use crate::exteralg::{Algebra, PointwiseForm};
use crate::testforms::{complement_sign, simplex_exp_integral};

struct Piece {
    coeff: f64,
    v0: Vec<f64>,
    edges: Vec<Vec<f64>>,
    minors: Vec<f64>,
}

/// `μ_B(m) = c(e^{-2πi m·x} e^B)` for every p-blade `B` (lexicographic) and
/// every grid slot; Nyquist slots are zero. Laid out blade-major.
pub fn chain_moments(c: &PolyChain, grid: &Grid) -> Result<Vec<Complex64>> {
    let nn = c.ambient();
    if grid.axes() != nn {
        return Err(Error::Dimension {
            expected: grid.axes(),
            found: nn,
        });
    }
    let p = c.dim();
    let blades = blades_of_grade(nn, p);
    let nodes = grid.nodes();
    let pieces: Vec<Piece> = c
        .canonicalize()
        .terms()
        .iter()
        .map(|(a, s)| {
            let e = s.edges();
            let minors = blades
                .iter()
                .map(|b| {
                    let rows = b.indices0();
                    if p == 0 {
                        1.0
                    } else {
                        DMatrix::from_fn(p, p, |i, j| e[(rows[i], j)]).determinant()
                    }
                })
                .collect();
            Piece {
                coeff: *a,
                v0: s.vertices()[0].clone(),
                edges: (0..p)
                    .map(|j| e.column(j).iter().copied().collect())
                    .collect(),
                minors,
            }
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); blades.len() * nodes];
    let shape = grid.shape().to_vec();
    let mut z = vec![0.0; p];
    for idx in 0..nodes {
        let mi = grid.multi_index(idx);
        if mi.iter().zip(&shape).any(|(&i, &s)| Grid::is_nyquist(i, s)) {
            continue;
        }
        let neg: Vec<usize> = mi.iter().zip(&shape).map(|(&i, &s)| (s - i) % s).collect();
        let neg_idx = grid.linear_index(&neg);
        if neg_idx < idx {
            continue;
        }
        let w: Vec<f64> = mi
            .iter()
            .zip(&shape)
            .map(|(&i, &s)| -2.0 * PI * Grid::signed_mode(i, s) as f64)
            .collect();
        for pc in &pieces {
            let a0: f64 = w.iter().zip(&pc.v0).map(|(a, b)| a * b).sum();
            for (zj, e) in z.iter_mut().zip(&pc.edges) {
                *zj = w.iter().zip(e).map(|(a, b)| a * b).sum();
            }
            let val = Complex64::from_polar(pc.coeff, a0) * simplex_exp_integral(&z);
            for (bi, &m) in pc.minors.iter().enumerate() {
                if m != 0.0 {
                    out[bi * nodes + idx] += val * m;
                }
            }
        }
        if neg_idx != idx {
            for bi in 0..blades.len() {
                out[bi * nodes + neg_idx] = out[bi * nodes + idx].conj();
            }
        }
    }
    Ok(out)
}

/// The chain `c` as a distributional form, band-limited to the grid:
/// spectral coefficients `β̂_{B^c} = sign(B^c, B) μ_B`.
pub fn chain_to_spectral(c: &PolyChain, grid: &Grid) -> Result<FieldForm> {
    let nn = c.ambient();
    if nn % 2 != 0 {
        return Err(Error::Dimension {
            expected: nn + 1,
            found: nn,
        });
    }
    let n = nn / 2;
    let mu = chain_moments(c, grid)?;
    wedge_moments(n, grid, c.dim(), &mu, &PointwiseForm::scalar(n, 1.0))
}

/// Band-limited form of `α ∧ c` from the moments of `c`.
fn wedge_moments(
    n: usize,
    grid: &Grid,
    p: usize,
    mu: &[Complex64],
    alpha: &PointwiseForm,
) -> Result<FieldForm> {
    let nn = 2 * n;
    let ka = alpha.homogeneous_degree()?.unwrap_or(0);
    let q = p
        .checked_sub(ka)
        .ok_or_else(|| Error::domain(format!("{ka}-form wedged with a {p}-chain")))?;
    let nodes = grid.nodes();
    let p_blades = blades_of_grade(nn, p);
    let alg = Algebra::get(n)?;
    let degree = nn - q;
    let mut data = vec![Complex64::new(0.0, 0.0); alg.basis(degree).len() * nodes];
    for d in blades_of_grade(nn, q) {
        let (dc, sign) = complement_sign(nn, d);
        let row = alg.position(dc);
        for (b, a) in alpha.terms() {
            let s = wedge_sign(b, d);
            if s == 0 {
                continue;
            }
            let bi = p_blades.binary_search(&Blade(b.0 | d.0)).expect("p-blade");
            let f = sign * a * s as f64;
            let src = &mu[bi * nodes..(bi + 1) * nodes];
            for (dst, v) in data[row * nodes..(row + 1) * nodes].iter_mut().zip(src) {
                *dst += v * f;
            }
        }
    }
    FieldForm::from_spectral(n, grid, degree, data)
}

impl Mollifier {
    /// Mollified current as a field on `grid`.
    ///
    /// With a `region`, every chain vertex must lie at `ℓ∞` depth greater
    /// than the width inside it, so that the smoothed current stays in it.
    pub fn smooth_current(
        &self,
        t: &CurrentRep,
        grid: &Grid,
        region: Option<&TorusBox>,
    ) -> Result<FieldForm> {
        let raw = match t {
            CurrentRep::Field { field } => {
                if let Some(r) = region {
                    check_field_region(field, r, self.width())?;
                }
                return Ok(self.smooth_field(field));
            }
            CurrentRep::Chain { chain } => {
                self.check_region(chain, region)?;
                chain_to_spectral(chain, grid)?
            }
            CurrentRep::FormWedgeChain { form, chain } => {
                self.check_region(chain, region)?;
                let WedgeFactor::Constant { form } = form else {
                    return Err(Error::Unsupported(
                        "smoothing a field wedged with a chain".into(),
                    ));
                };
                let nn = chain.ambient();
                let mu = chain_moments(chain, grid)?;
                wedge_moments(nn / 2, grid, chain.dim(), &mu, form)?
            }
        };
        let tables: Vec<Vec<f64>> = grid.shape().iter().map(|&s| self.symbol_1d(s)).collect();
        let FieldData::Spectral(mut spec) = raw.data.clone() else {
            unreachable!("deposits are spectral")
        };
        multiply_tensor_symbol(grid, &mut spec, &tables);
        Ok(raw.with_data(raw.degree(), FieldData::Spectral(spec)))
    }

    fn check_region(&self, c: &PolyChain, region: Option<&TorusBox>) -> Result<()> {
        let Some(r) = region else { return Ok(()) };
        for (_, s) in c.terms() {
            for v in s.vertices() {
                let depth = r.depth(v);
                if depth <= self.width() {
                    return Err(Error::SupportViolation(format!(
                        "vertex {v:?} at depth {depth:.4} inside the region, mollifier width {}",
                        self.width()
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_field_region(f: &FieldForm, r: &TorusBox, width: f64) -> Result<()> {
    let norms = f.node_norms();
    let scale = norms.iter().copied().fold(0.0, f64::max);
    for (idx, &v) in norms.iter().enumerate() {
        if v > 1e-12 * scale.max(1e-300) {
            let x = f.grid().coords(idx);
            if r.depth(&x) <= width {
                return Err(Error::SupportViolation(format!(
                    "field nonzero at {x:?}, within {width} of the region boundary"
                )));
            }
        }
    }
    Ok(())
}
