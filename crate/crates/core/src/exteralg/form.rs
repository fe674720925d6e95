//! Sparse forms and polyvectors on R^{2n}.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::blade::{blades_of_grade, Blade};
use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped from sparse forms.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Largest supported half-dimension (2n coordinates fit in a `u16` mask).
pub const MAX_N: usize = 8;

macro_rules! sparse_multi {
    ($name:ident) => {
        impl $name {
            pub fn zero(n: usize) -> Self {
                Self {
                    n,
                    terms: BTreeMap::new(),
                }
            }

            pub fn scalar(n: usize, c: f64) -> Self {
                let mut f = Self::zero(n);
                f.add_term(Blade::EMPTY, c);
                f
            }

            /// Single basis element from a 1-based increasing index list.
            pub fn basis(n: usize, idx: &[usize]) -> Result<Self> {
                let b = blade_from_1based(n, idx)?;
                let mut f = Self::zero(n);
                f.add_term(b, 1.0);
                Ok(f)
            }

            pub fn from_terms<'a, I>(n: usize, terms: I) -> Result<Self>
            where
                I: IntoIterator<Item = (&'a [usize], f64)>,
            {
                let mut f = Self::zero(n);
                for (idx, c) in terms {
                    f.add_term(blade_from_1based(n, idx)?, c);
                }
                Ok(f)
            }

            pub fn n(&self) -> usize {
                self.n
            }

            pub fn dim(&self) -> usize {
                2 * self.n
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn terms(&self) -> impl Iterator<Item = (Blade, f64)> + '_ {
                self.terms.iter().map(|(b, c)| (*b, *c))
            }

            pub fn len(&self) -> usize {
                self.terms.len()
            }

            pub fn is_empty(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn coeff(&self, b: Blade) -> f64 {
                self.terms.get(&b).copied().unwrap_or(0.0)
            }

            /// Coefficient of a 1-based index list (0 when absent or malformed).
            pub fn get(&self, idx: &[usize]) -> f64 {
                blade_from_1based(self.n, idx)
                    .map(|b| self.coeff(b))
                    .unwrap_or(0.0)
            }

            pub fn add_term(&mut self, b: Blade, c: f64) {
                let e = self.terms.entry(b).or_insert(0.0);
                *e += c;
                if e.abs() < ZERO_THRESHOLD {
                    self.terms.remove(&b);
                }
            }

            /// Set of grades that carry nonzero coefficients.
            pub fn grades(&self) -> Vec<usize> {
                let mut g: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
                g.sort_unstable();
                g.dedup();
                g
            }

            /// `Ok(Some(k))` if homogeneous of degree `k`, `Ok(None)` for zero,
            /// domain error for mixed degree.
            pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
                match self.grades().as_slice() {
                    [] => Ok(None),
                    [k] => Ok(Some(*k)),
                    _ => Err(Error::domain("form has mixed degree")),
                }
            }

            /// Graded component of degree `k`.
            pub fn part(&self, k: usize) -> Self {
                Self {
                    n: self.n,
                    terms: self
                        .terms
                        .iter()
                        .filter(|(b, _)| b.grade() == k)
                        .map(|(b, c)| (*b, *c))
                        .collect(),
                }
            }

            pub fn norm(&self) -> f64 {
                self.terms.values().map(|c| c * c).sum::<f64>().sqrt()
            }

            pub fn max_abs(&self) -> f64 {
                self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
            }

            pub fn scale(&self, s: f64) -> Self {
                let mut f = Self::zero(self.n);
                for (b, c) in self.terms() {
                    f.add_term(b, s * c);
                }
                f
            }

            /// Coefficients in the lexicographic basis of degree `k`.
            pub fn to_dense(&self, k: usize) -> Vec<f64> {
                blades_of_grade(self.dim(), k)
                    .into_iter()
                    .map(|b| self.coeff(b))
                    .collect()
            }

            pub fn from_dense(n: usize, k: usize, v: &[f64]) -> Self {
                let mut f = Self::zero(n);
                for (b, c) in blades_of_grade(2 * n, k).into_iter().zip(v) {
                    f.add_term(b, *c);
                }
                f
            }

            pub fn check_same(&self, other: &Self) -> Result<()> {
                if self.n != other.n {
                    return Err(Error::Dimension {
                        expected: self.n,
                        found: other.n,
                    });
                }
                Ok(())
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                assert_eq!(self.n, rhs.n, "dimension mismatch");
                let mut f = self.clone();
                for (b, c) in rhs.terms() {
                    f.add_term(b, c);
                }
                f
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                &self + &rhs
            }
        }

        impl AddAssign<&$name> for $name {
            fn add_assign(&mut self, rhs: &$name) {
                assert_eq!(self.n, rhs.n, "dimension mismatch");
                for (b, c) in rhs.terms() {
                    self.add_term(b, c);
                }
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                self + &rhs.scale(-1.0)
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                &self - &rhs
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                self.scale(-1.0)
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                self.scale(-1.0)
            }
        }

        impl Mul<&$name> for f64 {
            type Output = $name;
            fn mul(self, rhs: &$name) -> $name {
                rhs.scale(self)
            }
        }

        impl Mul<$name> for f64 {
            type Output = $name;
            fn mul(self, rhs: $name) -> $name {
                rhs.scale(self)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                SparseJson {
                    n: self.n,
                    terms: self
                        .terms()
                        .map(|(b, c)| TermJson {
                            idx: b.indices1(),
                            c,
                        })
                        .collect(),
                }
                .serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let raw = SparseJson::deserialize(d)?;
                Self::from_terms(raw.n, raw.terms.iter().map(|t| (t.idx.as_slice(), t.c)))
                    .map_err(serde::de::Error::custom)
            }
        }
    };
}

/// An element of the exterior algebra of the dual of R^{2n}.
#[derive(Clone, Debug, PartialEq)]
pub struct PointwiseForm {
    n: usize,
    terms: BTreeMap<Blade, f64>,
}

/// A multivector on R^{2n}; houses the Poisson bivector.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyVector {
    n: usize,
    terms: BTreeMap<Blade, f64>,
}

sparse_multi!(PointwiseForm);
sparse_multi!(PolyVector);

impl PointwiseForm {
    pub(crate) fn same_dim(&self, other: &Self) -> Result<()> {
        self.check_same(other)
    }
}

impl PolyVector {
    pub(crate) fn same_dim_form(&self, other: &PointwiseForm) -> Result<()> {
        if self.n != other.n() {
            return Err(Error::Dimension {
                expected: self.n,
                found: other.n(),
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    idx: Vec<usize>,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct SparseJson {
    n: usize,
    terms: Vec<TermJson>,
}

pub(crate) fn blade_from_1based(n: usize, idx: &[usize]) -> Result<Blade> {
    if n == 0 || n > MAX_N {
        return Err(Error::domain(format!(
            "half-dimension {n} outside 1..={MAX_N}"
        )));
    }
    if idx.iter().any(|&i| i == 0 || i > 2 * n) {
        return Err(Error::domain(format!(
            "index list {idx:?} outside 1..={}",
            2 * n
        )));
    }
    let zero: Vec<usize> = idx.iter().map(|i| i - 1).collect();
    Blade::from_indices0(&zero)
        .ok_or_else(|| Error::domain(format!("index list {idx:?} is not strictly increasing")))
}
