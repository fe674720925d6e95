//! Chevalley–Eilenberg models of symplectic nilmanifolds.

use std::io::Read;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exteralg::blade::{blades_of_grade, wedge_sign, Blade};
use crate::exteralg::{Algebra, PointwiseForm, MAX_TABLE_N};

/// Residual allowed in the Jacobi identity and in `dω = 0`.
pub const MODEL_TOL: f64 = 1e-12;

/// One structure constant `c^k_{ij}` (1-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: f64,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    n: usize,
    structure: Vec<StructureConstant>,
    omega: PointwiseForm,
}

/// Invariant forms on a nilmanifold: `de^k = Σ_{i<j} c^k_{ij} e^i ∧ e^j`
/// with a closed nondegenerate invariant 2-form `ω`.
///
/// All computations run in a Darboux coframe `f = A e` in which `ω` is the
/// standard form; the original data are kept for output.
#[derive(Clone, Debug)]
pub struct CEModel {
    name: String,
    n: usize,
    structure: Vec<StructureConstant>,
    omega: PointwiseForm,
    coframe: DMatrix<f64>,
    /// `d` on 1-forms of the Darboux coframe: column `a` holds `d f^a` in
    /// the degree-2 lexicographic basis.
    d1: DMatrix<f64>,
    d: Vec<DMatrix<f64>>,
}

impl CEModel {
    pub fn new(
        name: &str,
        n: usize,
        structure: Vec<StructureConstant>,
        omega: PointwiseForm,
    ) -> Result<CEModel> {
        if n == 0 || n > MAX_TABLE_N {
            return Err(Error::Model(format!(
                "half-dimension {n} outside 1..={MAX_TABLE_N}"
            )));
        }
        if omega.n() != n {
            return Err(Error::Model(format!(
                "ω lives in dimension {}, model in {}",
                omega.dim(),
                2 * n
            )));
        }
        let dim = 2 * n;
        for s in &structure {
            if s.i == 0 || s.j == 0 || s.k == 0 || s.i > dim || s.j > dim || s.k > dim {
                return Err(Error::Model(format!(
                    "structure index out of range in {s:?}"
                )));
            }
            if s.i == s.j {
                return Err(Error::Model(format!(
                    "c^{}_{{{}{}}} on the diagonal",
                    s.k, s.i, s.j
                )));
            }
        }
        if omega.terms().any(|(b, _)| b.grade() != 2) {
            return Err(Error::Model("ω must be a 2-form".into()));
        }
        let coframe = darboux_coframe(n, &omega)?;
        let b = coframe
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Model("singular coframe".into()))?;

        // d e^k as an antisymmetric matrix C_k with d e^k = ½ Σ C_k[i][j] e^i e^j.
        let mut ck = vec![DMatrix::<f64>::zeros(dim, dim); dim];
        for s in &structure {
            ck[s.k - 1][(s.i - 1, s.j - 1)] += s.c;
            ck[s.k - 1][(s.j - 1, s.i - 1)] -= s.c;
        }
        let two = blades_of_grade(dim, 2);
        let mut d1 = DMatrix::zeros(two.len(), dim);
        for a in 0..dim {
            let mut m = DMatrix::<f64>::zeros(dim, dim);
            for k in 0..dim {
                if coframe[(a, k)] != 0.0 {
                    m += &ck[k] * coframe[(a, k)];
                }
            }
            let m = b.transpose() * m * &b;
            for (r, blade) in two.iter().enumerate() {
                let ij = blade.indices0();
                d1[(r, a)] = m[(ij[0], ij[1])];
            }
        }
        let alg = Algebra::get(n)?;
        let d: Vec<DMatrix<f64>> = (0..=dim).map(|k| build_d(alg, dim, &d1, k)).collect();
        let model = CEModel {
            name: name.to_string(),
            n,
            structure,
            omega,
            coframe,
            d1,
            d,
        };
        let jac = (&model.d[2] * &model.d[1]).abs().max();
        if jac > MODEL_TOL {
            return Err(Error::Model(format!(
                "Jacobi identity fails (d∘d on 1-forms = {jac:.3e})"
            )));
        }
        let std_omega = alg.to_dense(&crate::exteralg::make_standard_symplectic(n)?.0, 2);
        let dw = (&model.d[2] * std_omega).abs().max();
        if dw > MODEL_TOL {
            return Err(Error::Model(format!("ω is not closed (|dω| = {dw:.3e})")));
        }
        Ok(model)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn structure(&self) -> &[StructureConstant] {
        &self.structure
    }

    pub fn omega(&self) -> &PointwiseForm {
        &self.omega
    }

    /// `A` with `f^a = Σ_k A_{ak} e^k`; `ω = Σ f^{2i-1} ∧ f^{2i}`.
    pub fn coframe(&self) -> &DMatrix<f64> {
        &self.coframe
    }

    pub fn algebra(&self) -> &'static Algebra {
        Algebra::get(self.n).expect("validated n")
    }

    /// Matrix of `d : Λ^k → Λ^{k+1}` in the Darboux coframe (zero rows on
    /// the top degree).
    pub fn d(&self, k: usize) -> &DMatrix<f64> {
        &self.d[k]
    }

    /// `d` on the Darboux 1-forms (columns), in the degree-2 basis.
    pub fn d_one_forms(&self) -> &DMatrix<f64> {
        &self.d1
    }

    /// A form given in the original coframe, rewritten in the Darboux one.
    pub fn to_darboux(&self, a: &PointwiseForm) -> Result<PointwiseForm> {
        let b = self
            .coframe
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Model("singular coframe".into()))?;
        transform_form(self.n, a, &b.transpose())
    }

    /// A form given in the Darboux coframe, rewritten in the original one.
    pub fn from_darboux(&self, a: &PointwiseForm) -> Result<PointwiseForm> {
        transform_form(self.n, a, &self.coframe.transpose())
    }

    pub fn from_json<R: Read>(name: &str, r: R) -> Result<CEModel> {
        let f: ModelFile = serde_json::from_reader(r)?;
        CEModel::new(name, f.n, f.structure, f.omega)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ModelFile {
            n: self.n,
            structure: self.structure.clone(),
            omega: self.omega.clone(),
        })?)
    }
}

/// `e^i ↦ Σ_a M_{ai} f^a`, extended multiplicatively.
fn transform_form(n: usize, a: &PointwiseForm, m: &DMatrix<f64>) -> Result<PointwiseForm> {
    let dim = 2 * n;
    let mut out = PointwiseForm::zero(n);
    for (blade, c) in a.terms() {
        let mut acc = PointwiseForm::scalar(n, c);
        for i in blade.indices0() {
            let mut img = PointwiseForm::zero(n);
            for r in 0..dim {
                if m[(r, i)] != 0.0 {
                    img.add_term(Blade(1 << r), m[(r, i)]);
                }
            }
            acc = crate::exteralg::wedge(&acc, &img)?;
        }
        out = out + acc;
    }
    Ok(out)
}

/// Symplectic Gram–Schmidt: returns `A` with `ω = Σ f^{2i} ∧ f^{2i+1}`
/// (0-based) for `f = A e`.
fn darboux_coframe(n: usize, omega: &PointwiseForm) -> Result<DMatrix<f64>> {
    let dim = 2 * n;
    let mut om = DMatrix::<f64>::zeros(dim, dim);
    for (b, c) in omega.terms() {
        let ij = b.indices0();
        om[(ij[0], ij[1])] += c;
        om[(ij[1], ij[0])] -= c;
    }
    let form = |u: &DMatrix<f64>, v: &DMatrix<f64>| (u.transpose() * &om * v)[(0, 0)];
    let mut pool: Vec<DMatrix<f64>> = (0..dim)
        .map(|i| DMatrix::from_fn(dim, 1, |r, _| if r == i { 1.0 } else { 0.0 }))
        .collect();
    let mut cols: Vec<DMatrix<f64>> = Vec::new();
    for _ in 0..n {
        let mut best = (0, 0, 0.0);
        for i in 0..pool.len() {
            for j in 0..pool.len() {
                let w = form(&pool[i], &pool[j]);
                if w > best.2 + 1e-12 {
                    best = (i, j, w);
                }
            }
        }
        if best.2 <= 1e-10 {
            return Err(Error::Model("ω is degenerate".into()));
        }
        let u = pool[best.0].clone();
        let v = &pool[best.1] / best.2;
        let mut rest = Vec::new();
        for (t, w) in pool.into_iter().enumerate() {
            if t == best.0 || t == best.1 {
                continue;
            }
            let w2 = &w + &v * form(&w, &u) - &u * form(&w, &v);
            if w2.abs().max() > 1e-12 {
                rest.push(w2);
            }
        }
        pool = rest;
        cols.push(u);
        cols.push(v);
    }
    let bm = DMatrix::from_fn(dim, dim, |r, c| cols[c][(r, 0)]);
    bm.try_inverse()
        .ok_or_else(|| Error::Model("ω is degenerate".into()))
}

/// `d` on `Λ^k` as a derivation from its values on 1-forms.
fn build_d(alg: &Algebra, dim: usize, d1: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    if k >= dim {
        return DMatrix::zeros(0, alg.size(k));
    }
    let two = blades_of_grade(dim, 2);
    let mut m = DMatrix::zeros(alg.size(k + 1), alg.size(k));
    for (col, &blade) in alg.basis(k).iter().enumerate() {
        let idx = blade.indices0();
        for (t, &a) in idx.iter().enumerate() {
            let prefix = Blade(idx[..t].iter().fold(0u16, |acc, &i| acc | (1 << i)));
            let suffix = Blade(idx[t + 1..].iter().fold(0u16, |acc, &i| acc | (1 << i)));
            let sign_t = if t % 2 == 0 { 1.0 } else { -1.0 };
            for (r, &pair) in two.iter().enumerate() {
                let c = d1[(r, a)];
                if c == 0.0 {
                    continue;
                }
                let s1 = wedge_sign(prefix, pair);
                if s1 == 0 {
                    continue;
                }
                let mid = Blade(prefix.0 | pair.0);
                let s2 = wedge_sign(mid, suffix);
                if s2 == 0 {
                    continue;
                }
                let out = Blade(mid.0 | suffix.0);
                m[(alg.position(out), col)] += sign_t * (s1 * s2) as f64 * c;
            }
        }
    }
    m
}

/// Abelian model of `T^{2n}` with the standard form.
pub fn abelian(n: usize) -> Result<CEModel> {
    let (omega, _) = crate::exteralg::make_standard_symplectic(n)?;
    CEModel::new(&format!("torus{}", 2 * n), n, Vec::new(), omega)
}

/// Kodaira–Thurston: `de^3 = e^1 ∧ e^2`, `ω = e^1 ∧ e^4 + e^2 ∧ e^3`.
pub fn kodaira_thurston() -> Result<CEModel> {
    let omega = PointwiseForm::basis(2, &[1, 4])? + PointwiseForm::basis(2, &[2, 3])?;
    CEModel::new(
        "kodaira-thurston",
        2,
        vec![StructureConstant {
            i: 1,
            j: 2,
            k: 3,
            c: 1.0,
        }],
        omega,
    )
}

/// Six-dimensional nilmanifold with `de^4 = e^1 ∧ e^2`, `de^5 = e^1 ∧ e^3`
/// and `ω = e^1 ∧ e^6 + e^2 ∧ e^5 + e^3 ∧ e^4`; `dd^Λ` is nonzero on 3-forms.
pub fn nil6() -> Result<CEModel> {
    let sc = |i, j, k| StructureConstant { i, j, k, c: 1.0 };
    let omega = PointwiseForm::basis(3, &[1, 6])?
        + PointwiseForm::basis(3, &[2, 5])?
        + PointwiseForm::basis(3, &[3, 4])?;
    CEModel::new("nil6", 3, vec![sc(1, 2, 4), sc(1, 3, 5)], omega)
}

/// Product model with the sum of the symplectic forms.
pub fn product(a: &CEModel, b: &CEModel) -> Result<CEModel> {
    let n = a.n + b.n;
    let shift = 2 * a.n;
    let mut structure = a.structure.clone();
    structure.extend(b.structure.iter().map(|s| StructureConstant {
        i: s.i + shift,
        j: s.j + shift,
        k: s.k + shift,
        c: s.c,
    }));
    let mut omega = PointwiseForm::zero(n);
    for (blade, c) in a.omega.terms() {
        omega.add_term(blade, c);
    }
    for (blade, c) in b.omega.terms() {
        omega.add_term(Blade(blade.0 << shift), c);
    }
    CEModel::new(&format!("{}x{}", a.name, b.name), n, structure, omega)
}

/// Built-in models by name: `torus2`, `torus4`, `torus6`, `kodaira-thurston`,
/// `kt-x-torus2`, `nil6`.
pub fn library(name: &str) -> Result<CEModel> {
    match name {
        "torus2" => abelian(1),
        "torus4" => abelian(2),
        "torus6" => abelian(3),
        "kodaira-thurston" => kodaira_thurston(),
        "kt-x-torus2" => product(&kodaira_thurston()?, &abelian(1)?),
        "nil6" => nil6(),
        _ => Err(Error::Model(format!("unknown built-in model {name:?}"))),
    }
}

pub const LIBRARY_NAMES: [&str; 6] = [
    "torus2",
    "torus4",
    "torus6",
    "kodaira-thurston",
    "kt-x-torus2",
    "nil6",
];
