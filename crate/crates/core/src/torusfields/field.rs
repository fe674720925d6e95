//! Form fields on the flat torus `T^{2n} = R^{2n}/Z^{2n}`.

use std::borrow::Cow;
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::{forward_components, inverse_components};
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::exteralg::{Algebra, Op, PointwiseForm};
use crate::testforms::TrigForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Nodal,
    Spectral,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum FieldData {
    Nodal(Vec<f64>),
    Spectral(Vec<Complex64>),
}

/// A homogeneous degree-`k` form field sampled on a periodic grid.
///
/// Storage is component-major: component `c` (lexicographic multi-index of
/// degree `k`) occupies one contiguous block of `nodes` values, with the
/// last grid axis varying fastest. Spectral data holds normalized Fourier
/// coefficients in FFT slot order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldJson", into = "FieldJson")]
pub struct FieldForm {
    n: usize,
    grid: Grid,
    degree: usize,
    pub(crate) data: FieldData,
}

impl FieldForm {
    fn check(n: usize, grid: &Grid, degree: usize) -> Result<&'static Algebra> {
        let alg = Algebra::get(n)?;
        if grid.axes() != 2 * n {
            return Err(Error::Dimension {
                expected: 2 * n,
                found: grid.axes(),
            });
        }
        if degree > 2 * n {
            return Err(Error::domain(format!("degree {degree} exceeds {}", 2 * n)));
        }
        Ok(alg)
    }

    pub fn zeros(n: usize, grid: &Grid, degree: usize) -> Result<FieldForm> {
        let alg = Self::check(n, grid, degree)?;
        Ok(FieldForm {
            n,
            grid: grid.clone(),
            degree,
            data: FieldData::Nodal(vec![0.0; alg.size(degree) * grid.nodes()]),
        })
    }

    pub fn from_nodal(n: usize, grid: &Grid, degree: usize, data: Vec<f64>) -> Result<FieldForm> {
        let alg = Self::check(n, grid, degree)?;
        let expect = alg.size(degree) * grid.nodes();
        if data.len() != expect {
            return Err(Error::Dimension {
                expected: expect,
                found: data.len(),
            });
        }
        Ok(FieldForm {
            n,
            grid: grid.clone(),
            degree,
            data: FieldData::Nodal(data),
        })
    }

    pub fn from_spectral(
        n: usize,
        grid: &Grid,
        degree: usize,
        data: Vec<Complex64>,
    ) -> Result<FieldForm> {
        let alg = Self::check(n, grid, degree)?;
        let expect = alg.size(degree) * grid.nodes();
        if data.len() != expect {
            return Err(Error::Dimension {
                expected: expect,
                found: data.len(),
            });
        }
        Ok(FieldForm {
            n,
            grid: grid.clone(),
            degree,
            data: FieldData::Spectral(data),
        })
    }

    /// The constant field equal to `a` everywhere.
    pub fn constant(grid: &Grid, degree: usize, a: &PointwiseForm) -> Result<FieldForm> {
        let n = a.n();
        if let Some(k) = a.homogeneous_degree()? {
            if k != degree {
                return Err(Error::domain(format!(
                    "form of degree {k}, field of degree {degree}"
                )));
            }
        }
        let alg = Self::check(n, grid, degree)?;
        let nodes = grid.nodes();
        let mut data = vec![0.0; alg.size(degree) * nodes];
        for (b, c) in a.terms() {
            let p = alg.position(b);
            data[p * nodes..(p + 1) * nodes].fill(c);
        }
        Ok(FieldForm {
            n,
            grid: grid.clone(),
            degree,
            data: FieldData::Nodal(data),
        })
    }

    /// Sample `f(x)`, which returns coefficients in the lexicographic basis.
    pub fn from_fn<F: Fn(&[f64]) -> Vec<f64>>(
        n: usize,
        grid: &Grid,
        degree: usize,
        f: F,
    ) -> Result<FieldForm> {
        let alg = Self::check(n, grid, degree)?;
        let nodes = grid.nodes();
        let size = alg.size(degree);
        let mut data = vec![0.0; size * nodes];
        for i in 0..nodes {
            let v = f(&grid.coords(i));
            if v.len() != size {
                return Err(Error::Dimension {
                    expected: size,
                    found: v.len(),
                });
            }
            for (c, x) in v.into_iter().enumerate() {
                data[c * nodes + i] = x;
            }
        }
        Ok(FieldForm {
            n,
            grid: grid.clone(),
            degree,
            data: FieldData::Nodal(data),
        })
    }

    /// Sample a periodic test form.
    pub fn from_trig(n: usize, grid: &Grid, f: &TrigForm) -> Result<FieldForm> {
        if !f.is_periodic() {
            return Err(Error::domain("test form has non-integer frequencies"));
        }
        if f.ambient != 2 * n {
            return Err(Error::Dimension {
                expected: 2 * n,
                found: f.ambient,
            });
        }
        FieldForm::from_fn(n, grid, f.degree, |x| f.eval(x))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> usize {
        self.grid.nodes()
    }

    pub fn components(&self) -> usize {
        self.algebra().size(self.degree)
    }

    pub fn algebra(&self) -> &'static Algebra {
        Algebra::get(self.n).expect("validated at construction")
    }

    pub fn representation(&self) -> Representation {
        match self.data {
            FieldData::Nodal(_) => Representation::Nodal,
            FieldData::Spectral(_) => Representation::Spectral,
        }
    }

    pub fn nodal(&self) -> Cow<'_, [f64]> {
        match &self.data {
            FieldData::Nodal(v) => Cow::Borrowed(v),
            FieldData::Spectral(s) => Cow::Owned(inverse_components(&self.grid, s)),
        }
    }

    pub fn spectral(&self) -> Cow<'_, [Complex64]> {
        match &self.data {
            FieldData::Spectral(s) => Cow::Borrowed(s),
            FieldData::Nodal(v) => Cow::Owned(forward_components(&self.grid, v)),
        }
    }

    pub fn to_nodal(&self) -> FieldForm {
        FieldForm {
            data: FieldData::Nodal(self.nodal().into_owned()),
            ..self.shell()
        }
    }

    pub fn to_spectral(&self) -> FieldForm {
        FieldForm {
            data: FieldData::Spectral(self.spectral().into_owned()),
            ..self.shell()
        }
    }

    pub fn into_representation(self, r: Representation) -> FieldForm {
        if self.representation() == r {
            return self;
        }
        match r {
            Representation::Nodal => self.to_nodal(),
            Representation::Spectral => self.to_spectral(),
        }
    }

    fn shell(&self) -> FieldForm {
        FieldForm {
            n: self.n,
            grid: self.grid.clone(),
            degree: self.degree,
            data: FieldData::Nodal(Vec::new()),
        }
    }

    /// A field of the same grid and representation as `self`.
    pub(crate) fn with_data(&self, degree: usize, data: FieldData) -> FieldForm {
        FieldForm {
            n: self.n,
            grid: self.grid.clone(),
            degree,
            data,
        }
    }

    pub fn value_at_node(&self, idx: usize) -> PointwiseForm {
        let nodes = self.nodes();
        let data = self.nodal();
        let v: Vec<f64> = (0..self.components())
            .map(|c| data[c * nodes + idx])
            .collect();
        self.algebra().from_dense(self.degree, &v)
    }

    /// Euclidean coefficient norm at every node.
    pub fn node_norms(&self) -> Vec<f64> {
        let nodes = self.nodes();
        let data = self.nodal();
        let mut out = vec![0.0; nodes];
        for c in 0..self.components() {
            for (o, x) in out.iter_mut().zip(&data[c * nodes..(c + 1) * nodes]) {
                *o += x * x;
            }
        }
        out.iter_mut().for_each(|o| *o = o.sqrt());
        out
    }

    /// Maximum over nodes of the Euclidean coefficient norm.
    pub fn sup_norm(&self) -> f64 {
        self.node_norms().into_iter().fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude in whichever representation is stored.
    pub fn max_abs(&self) -> f64 {
        match &self.data {
            FieldData::Nodal(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            FieldData::Spectral(s) => s.iter().fold(0.0, |m, x| m.max(x.norm())),
        }
    }

    fn same_layout(&self, other: &FieldForm) -> Result<()> {
        if self.n != other.n || self.grid != other.grid {
            return Err(Error::domain("fields live on different grids"));
        }
        if self.degree != other.degree {
            return Err(Error::domain(format!(
                "degrees {} and {} differ",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    /// `a·self + b·other`, in the representation of `self`.
    pub fn lin_comb(&self, a: f64, other: &FieldForm, b: f64) -> Result<FieldForm> {
        self.same_layout(other)?;
        Ok(match &self.data {
            FieldData::Nodal(x) => {
                let y = other.nodal();
                let v = x.iter().zip(y.iter()).map(|(p, q)| a * p + b * q).collect();
                self.with_data(self.degree, FieldData::Nodal(v))
            }
            FieldData::Spectral(x) => {
                let y = other.spectral();
                let v = x.iter().zip(y.iter()).map(|(p, q)| p * a + q * b).collect();
                self.with_data(self.degree, FieldData::Spectral(v))
            }
        })
    }

    pub fn add(&self, other: &FieldForm) -> Result<FieldForm> {
        self.lin_comb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &FieldForm) -> Result<FieldForm> {
        self.lin_comb(1.0, other, -1.0)
    }

    pub fn scale(&self, s: f64) -> FieldForm {
        let data = match &self.data {
            FieldData::Nodal(x) => FieldData::Nodal(x.iter().map(|v| v * s).collect()),
            FieldData::Spectral(x) => FieldData::Spectral(x.iter().map(|v| v * s).collect()),
        };
        self.with_data(self.degree, data)
    }

    /// Sup of the nodal difference; fields on the same layout only.
    pub fn max_diff(&self, other: &FieldForm) -> Result<f64> {
        Ok(self.sub(other)?.to_nodal().max_abs())
    }

    /// Apply a constant pointwise operator at every node (or mode; the
    /// operator commutes with the Fourier transform).
    pub fn apply_op(&self, op: &Op, out_degree: usize) -> FieldForm {
        let nodes = self.nodes();
        debug_assert_eq!(op.cols(), self.components());
        let rows = op.rows();
        let data = match &self.data {
            FieldData::Nodal(x) => {
                let mut out = vec![0.0; rows * nodes];
                for &(r, c, w) in &op.entries {
                    let src = &x[c * nodes..(c + 1) * nodes];
                    for (o, s) in out[r * nodes..(r + 1) * nodes].iter_mut().zip(src) {
                        *o += w * s;
                    }
                }
                FieldData::Nodal(out)
            }
            FieldData::Spectral(x) => {
                let mut out = vec![Complex64::new(0.0, 0.0); rows * nodes];
                for &(r, c, w) in &op.entries {
                    let src = &x[c * nodes..(c + 1) * nodes];
                    for (o, s) in out[r * nodes..(r + 1) * nodes].iter_mut().zip(src) {
                        *o += s * w;
                    }
                }
                FieldData::Spectral(out)
            }
        };
        self.with_data(out_degree, data)
    }

    /// Write the `.sff` format: a one-line JSON header, a newline, then
    /// little-endian `f64` values node-major with multi-indices varying
    /// fastest (spectral payloads interleave real and imaginary parts).
    pub fn write_sff<W: Write>(&self, mut w: W) -> Result<()> {
        let header = SffHeader {
            n: self.n,
            grid_shape: self.grid.shape().to_vec(),
            degree: self.degree,
            representation: self.representation(),
        };
        serde_json::to_writer(&mut w, &header)?;
        w.write_all(b"\n")?;
        let nodes = self.nodes();
        let comps = self.components();
        let mut buf = Vec::new();
        match &self.data {
            FieldData::Nodal(x) => {
                buf.reserve(8 * x.len());
                for i in 0..nodes {
                    for c in 0..comps {
                        buf.extend_from_slice(&x[c * nodes + i].to_le_bytes());
                    }
                }
            }
            FieldData::Spectral(x) => {
                buf.reserve(16 * x.len());
                for i in 0..nodes {
                    for c in 0..comps {
                        let v = x[c * nodes + i];
                        buf.extend_from_slice(&v.re.to_le_bytes());
                        buf.extend_from_slice(&v.im.to_le_bytes());
                    }
                }
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_sff<R: Read>(mut r: R) -> Result<FieldForm> {
        let mut all = Vec::new();
        r.read_to_end(&mut all)?;
        let nl = all
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::domain("missing .sff header line"))?;
        let header: SffHeader = serde_json::from_slice(&all[..nl])?;
        let grid = Grid::new(&header.grid_shape)?;
        let alg = Self::check(header.n, &grid, header.degree)?;
        let nodes = grid.nodes();
        let comps = alg.size(header.degree);
        let payload = &all[nl + 1..];
        let vals: Vec<f64> = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        let per = match header.representation {
            Representation::Nodal => 1,
            Representation::Spectral => 2,
        };
        if vals.len() != per * nodes * comps || payload.len() % 8 != 0 {
            return Err(Error::Dimension {
                expected: per * nodes * comps,
                found: vals.len(),
            });
        }
        match header.representation {
            Representation::Nodal => {
                let mut data = vec![0.0; nodes * comps];
                for i in 0..nodes {
                    for c in 0..comps {
                        data[c * nodes + i] = vals[i * comps + c];
                    }
                }
                FieldForm::from_nodal(header.n, &grid, header.degree, data)
            }
            Representation::Spectral => {
                let mut data = vec![Complex64::new(0.0, 0.0); nodes * comps];
                for i in 0..nodes {
                    for c in 0..comps {
                        let j = 2 * (i * comps + c);
                        data[c * nodes + i] = Complex64::new(vals[j], vals[j + 1]);
                    }
                }
                FieldForm::from_spectral(header.n, &grid, header.degree, data)
            }
        }
    }
}

/// JSON embedding of a field (nodal values, component-major).
#[derive(Serialize, Deserialize)]
struct FieldJson {
    n: usize,
    grid_shape: Vec<usize>,
    degree: usize,
    nodal: Vec<f64>,
}

impl TryFrom<FieldJson> for FieldForm {
    type Error = Error;

    fn try_from(f: FieldJson) -> Result<FieldForm> {
        FieldForm::from_nodal(f.n, &Grid::new(&f.grid_shape)?, f.degree, f.nodal)
    }
}

impl From<FieldForm> for FieldJson {
    fn from(f: FieldForm) -> FieldJson {
        FieldJson {
            n: f.n,
            grid_shape: f.grid.shape().to_vec(),
            degree: f.degree,
            nodal: f.nodal().into_owned(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SffHeader {
    n: usize,
    grid_shape: Vec<usize>,
    degree: usize,
    representation: Representation,
}
