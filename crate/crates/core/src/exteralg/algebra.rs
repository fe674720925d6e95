//! Dense operator tables for a fixed half-dimension, built once and cached.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use super::blade::{blades_of_grade, Blade};
use super::form::PointwiseForm;
use super::ops;
use crate::error::{Error, Result};
use crate::linalg;

/// Largest half-dimension with cached dense tables.
pub const MAX_TABLE_N: usize = 5;

/// A linear map between graded pieces, kept both dense and as a triplet list.
#[derive(Clone, Debug)]
pub struct Op {
    pub mat: DMatrix<f64>,
    pub entries: Vec<(usize, usize, f64)>,
}

impl Op {
    fn new(mat: DMatrix<f64>) -> Self {
        let mut entries = Vec::new();
        for c in 0..mat.ncols() {
            for r in 0..mat.nrows() {
                let v = mat[(r, c)];
                if v.abs() > 1e-14 {
                    entries.push((r, c, v));
                }
            }
        }
        Op { mat, entries }
    }

    pub fn rows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn cols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows()];
        for &(r, c, x) in &self.entries {
            out[r] += x * v[c];
        }
        out
    }

    pub fn transpose(&self) -> Op {
        Op::new(self.mat.transpose())
    }
}

/// One primitive component of a Lefschetz decomposition, `β_{k-2r}`.
#[derive(Clone, Debug)]
pub struct DecompBlock {
    pub r: usize,
    /// Maps a degree-`k` coefficient vector to `β_{k-2r}`.
    pub proj: Op,
}

#[derive(Debug)]
pub struct Algebra {
    pub n: usize,
    pub dim: usize,
    basis: Vec<Vec<Blade>>,
    pos: Vec<usize>,
    l: Vec<Op>,
    lambda: Vec<Op>,
    star: Vec<Op>,
    gram: Vec<DMatrix<f64>>,
    wedge_e: Vec<Vec<Op>>,
    contract_e: Vec<Vec<Op>>,
    primitive: Vec<DMatrix<f64>>,
    decomp: Vec<Vec<DecompBlock>>,
    inv_lpow: Vec<Op>,
}

static TABLES: [OnceLock<Algebra>; MAX_TABLE_N + 1] = [const { OnceLock::new() }; MAX_TABLE_N + 1];

impl Algebra {
    pub fn get(n: usize) -> Result<&'static Algebra> {
        if n == 0 || n > MAX_TABLE_N {
            return Err(Error::domain(format!(
                "dense tables exist for 1 <= n <= {MAX_TABLE_N}, got {n}"
            )));
        }
        Ok(TABLES[n].get_or_init(|| Algebra::build(n)))
    }

    fn build(n: usize) -> Algebra {
        let dim = 2 * n;
        let basis: Vec<Vec<Blade>> = (0..=dim).map(|k| blades_of_grade(dim, k)).collect();
        let mut pos = vec![0usize; 1 << dim];
        for row in &basis {
            for (i, b) in row.iter().enumerate() {
                pos[b.0 as usize] = i;
            }
        }
        let size = |k: usize| basis[k].len();
        let dense_of = |f: &PointwiseForm, k: usize| -> Vec<f64> {
            let mut v = vec![0.0; size(k)];
            for (b, c) in f.terms() {
                debug_assert_eq!(b.grade(), k);
                v[pos[b.0 as usize]] = c;
            }
            v
        };
        let unit = |k: usize, i: usize| -> PointwiseForm {
            let mut f = PointwiseForm::zero(n);
            f.add_term(basis[k][i], 1.0);
            f
        };
        let table =
            |from: usize, to: Option<usize>, op: &dyn Fn(&PointwiseForm) -> PointwiseForm| -> Op {
                let rows = to.map_or(0, size);
                let mut m = DMatrix::zeros(rows, size(from));
                if let Some(to) = to {
                    for i in 0..size(from) {
                        let img = op(&unit(from, i));
                        for (r, x) in dense_of(&img, to).into_iter().enumerate() {
                            m[(r, i)] = x;
                        }
                    }
                }
                Op::new(m)
            };

        let up = |k: usize, s: usize| (k + s <= dim).then_some(k + s);
        let down = |k: usize, s: usize| (k >= s).then(|| k - s);

        let l: Vec<Op> = (0..=dim)
            .map(|k| table(k, up(k, 2), &|f| ops::lefschetz_l(f).expect("same n")))
            .collect();
        let lambda: Vec<Op> = (0..=dim)
            .map(|k| table(k, down(k, 2), &|f| ops::dual_lefschetz(f).expect("same n")))
            .collect();
        let star: Vec<Op> = (0..=dim)
            .map(|k| table(k, Some(dim - k), &|f| ops::star(f).expect("homogeneous")))
            .collect();
        let gram: Vec<DMatrix<f64>> = (0..=dim)
            .map(|k| {
                DMatrix::from_fn(size(k), size(k), |i, j| {
                    ops::pairing(&unit(k, i), &unit(k, j)).expect("same degree")
                })
            })
            .collect();
        let wedge_e: Vec<Vec<Op>> = (0..=dim)
            .map(|k| {
                (0..dim)
                    .map(|j| {
                        let mut ej = PointwiseForm::zero(n);
                        ej.add_term(Blade(1 << j), 1.0);
                        table(k, up(k, 1), &|f| ops::wedge(&ej, f).expect("same n"))
                    })
                    .collect()
            })
            .collect();
        // The standard basis is orthonormal, so ι_{∂_j} is the transpose of e^j ∧.
        let contract_e: Vec<Vec<Op>> = (0..=dim)
            .map(|k| {
                (0..dim)
                    .map(|j| {
                        if k == 0 {
                            Op::new(DMatrix::zeros(0, 1))
                        } else {
                            wedge_e[k - 1][j].transpose()
                        }
                    })
                    .collect()
            })
            .collect();
        let primitive: Vec<DMatrix<f64>> = (0..=n)
            .map(|m| {
                if m < 2 {
                    DMatrix::identity(size(m), size(m))
                } else {
                    linalg::null_space(&lambda[m].mat)
                }
            })
            .collect();

        let lpow = |k: usize, r: usize| -> DMatrix<f64> {
            let mut m = DMatrix::identity(size(k), size(k));
            for s in 0..r {
                m = &l[k + 2 * s].mat * m;
            }
            m
        };

        let mut decomp = Vec::with_capacity(dim + 1);
        for k in 0..=dim {
            let rs: Vec<usize> = (k.saturating_sub(n)..=k / 2).collect();
            let mut cols = DMatrix::zeros(size(k), 0);
            let mut widths = Vec::new();
            for &r in &rs {
                let m = k - 2 * r;
                let fact: f64 = (1..=r).map(|i| i as f64).product();
                let block = lpow(m, r) * &primitive[m] / fact;
                widths.push(primitive[m].ncols());
                cols = linalg::hcat(&cols, &block);
            }
            assert_eq!(
                cols.ncols(),
                size(k),
                "primitive blocks must span degree {k}"
            );
            let inv = cols
                .clone()
                .try_inverse()
                .expect("Lefschetz basis is invertible");
            let mut off = 0;
            let mut blocks = Vec::new();
            for (&r, &w) in rs.iter().zip(&widths) {
                let m = k - 2 * r;
                let coeff = inv.rows(off, w).into_owned();
                off += w;
                blocks.push(DecompBlock {
                    r,
                    proj: Op::new(&primitive[m] * coeff),
                });
            }
            decomp.push(blocks);
        }

        let inv_lpow = (0..=n)
            .map(|k| {
                let m = lpow(n - k, k);
                Op::new(m.try_inverse().expect("L^k is an isomorphism"))
            })
            .collect();

        Algebra {
            n,
            dim,
            basis,
            pos,
            l,
            lambda,
            star,
            gram,
            wedge_e,
            contract_e,
            primitive,
            decomp,
            inv_lpow,
        }
    }

    pub fn size(&self, k: usize) -> usize {
        self.basis.get(k).map_or(0, Vec::len)
    }

    pub fn basis(&self, k: usize) -> &[Blade] {
        &self.basis[k]
    }

    pub fn position(&self, b: Blade) -> usize {
        self.pos[b.0 as usize]
    }

    /// `L`: degree `k` to `k + 2` (zero rows past the top degree).
    pub fn l(&self, k: usize) -> &Op {
        &self.l[k]
    }

    /// `Λ`: degree `k` to `k - 2` (zero rows below degree 2).
    pub fn lambda(&self, k: usize) -> &Op {
        &self.lambda[k]
    }

    pub fn star(&self, k: usize) -> &Op {
        &self.star[k]
    }

    pub fn gram(&self, k: usize) -> &DMatrix<f64> {
        &self.gram[k]
    }

    /// `e^j ∧ ·` on degree `k`.
    pub fn wedge_e(&self, k: usize, j: usize) -> &Op {
        &self.wedge_e[k][j]
    }

    /// `ι_{∂_j}` on degree `k`.
    pub fn contract_e(&self, k: usize, j: usize) -> &Op {
        &self.contract_e[k][j]
    }

    /// Orthonormal basis (columns) of the primitive subspace of degree `m <= n`.
    pub fn primitive_basis(&self, m: usize) -> &DMatrix<f64> {
        &self.primitive[m]
    }

    pub fn decomposition(&self, k: usize) -> &[DecompBlock] {
        &self.decomp[k]
    }

    /// Inverse of `L^k : Λ^{n-k} → Λ^{n+k}`.
    pub fn inv_l_pow(&self, k: usize) -> &Op {
        &self.inv_lpow[k]
    }

    /// Dense `L^r` on degree `k`.
    pub fn l_pow(&self, k: usize, r: usize) -> DMatrix<f64> {
        let mut m = DMatrix::identity(self.size(k), self.size(k));
        for s in 0..r {
            if k + 2 * s + 2 > self.dim {
                return DMatrix::zeros(0, self.size(k));
            }
            m = &self.l[k + 2 * s].mat * m;
        }
        m
    }

    pub fn to_dense(&self, f: &PointwiseForm, k: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.size(k));
        for (b, c) in f.terms() {
            if b.grade() == k {
                v[self.position(b)] = c;
            }
        }
        v
    }

    pub fn from_dense(&self, k: usize, v: &[f64]) -> PointwiseForm {
        let mut f = PointwiseForm::zero(self.n);
        for (b, c) in self.basis[k].iter().zip(v) {
            f.add_term(*b, *c);
        }
        f
    }
}
