//! Exact pointwise symplectic exterior algebra on R^{2n}.
//!
//! Coordinates are ordered `(x_1, y_1, .., x_n, y_n)` and
//! `ω = Σ dx_i ∧ dy_i`. The pairing on `k`-forms is the Gram determinant of
//! `π = ω^{-1}` (so `(e^1, e^2) = -1` for `n = 1`), which makes `⋆` an
//! involution and `(-1)^{k+1} ⋆ d ⋆ = [d, Λ]`. On `k`-forms the pairing is
//! graded symmetric: `(a, b) = (-1)^k (b, a)`.

mod algebra;
pub mod blade;
mod comass;
mod decompose;
mod form;
mod ops;

pub use algebra::{Algebra, DecompBlock, Op, MAX_TABLE_N};
pub use blade::Blade;
pub use comass::{comass, evaluate_on_frame, ComassBudget, ComassEstimate};
pub use decompose::{
    invert_l_power, is_primitive, lefschetz_decompose, lefschetz_decompose_lstsq,
    lefschetz_decompose_sl2, lefschetz_reconstruct, LefschetzComponent,
};
pub use form::{PointwiseForm, PolyVector, MAX_N, ZERO_THRESHOLD};
pub use ops::{
    counting_h, dual_lefschetz, interior, lefschetz_l, lefschetz_l_pow, make_standard_symplectic,
    pairing, star, volume_form, wedge,
};
