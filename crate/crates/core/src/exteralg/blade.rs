//! Basis multi-indices stored as bitmasks.
//!
//! Bit `i` stands for the 0-based coordinate index `i`; the coordinate order
//! is `(x_1, y_1, ..., x_n, y_n)`, so `x_i` is bit `2(i-1)` and `y_i` is bit
//! `2i-1`. External interfaces speak 1-based index lists.

use std::cmp::Ordering;

/// A strictly increasing index subset of `{0, .., 15}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Blade(pub u16);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    pub fn from_indices0(idx: &[usize]) -> Option<Blade> {
        let mut bits = 0u16;
        let mut last: Option<usize> = None;
        for &i in idx {
            if i >= 16 || last.is_some_and(|l| l >= i) {
                return None;
            }
            bits |= 1 << i;
            last = Some(i);
        }
        Some(Blade(bits))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices0(self) -> Vec<usize> {
        (0..16).filter(|&i| self.contains(i)).collect()
    }

    pub fn indices1(self) -> Vec<usize> {
        self.indices0().into_iter().map(|i| i + 1).collect()
    }

    pub fn complement(self, dim: usize) -> Blade {
        Blade(!self.0 & full_mask(dim))
    }

    /// Position of `i` among the members of the blade, if present.
    pub fn rank_of(self, i: usize) -> Option<usize> {
        self.contains(i)
            .then(|| (self.0 & ((1u16 << i) - 1)).count_ones() as usize)
    }
}

pub fn full_mask(dim: usize) -> u16 {
    if dim >= 16 {
        u16::MAX
    } else {
        (1u16 << dim) - 1
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut a, mut b) = (self.0, other.0);
        loop {
            if a == b {
                return Ordering::Equal;
            }
            if a == 0 {
                return Ordering::Less;
            }
            if b == 0 {
                return Ordering::Greater;
            }
            let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
            if la != lb {
                return la.cmp(&lb);
            }
            a &= a - 1;
            b &= b - 1;
        }
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sign of `e_a ∧ e_b` relative to `e_{a ∪ b}`, or 0 if they overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> i32 {
    if a.0 & b.0 != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut rest = b.0;
    while rest != 0 {
        let j = rest.trailing_zeros();
        let above = if j >= 15 {
            0
        } else {
            a.0 & !((1u16 << (j + 1)) - 1)
        };
        swaps += above.count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `ι_{∂_i} e_a`: the resulting blade and its sign, or `None` if `i ∉ a`.
pub fn contract(i: usize, a: Blade) -> Option<(Blade, i32)> {
    let p = a.rank_of(i)?;
    let sign = if p % 2 == 0 { 1 } else { -1 };
    Some((Blade(a.0 & !(1 << i)), sign))
}

/// All blades of grade `k` in `dim` coordinates, in lexicographic order.
pub fn blades_of_grade(dim: usize, k: usize) -> Vec<Blade> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > dim {
        return out;
    }
    loop {
        out.push(Blade::from_indices0(&idx).expect("increasing"));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < dim - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
