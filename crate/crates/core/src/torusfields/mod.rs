//! Differential-form fields on the flat torus with constant `ω`.
//!
//! Fields are band-limited trigonometric polynomials sampled on a periodic
//! grid. `d` is spectral differentiation, all pointwise operators act node
//! by node, the smoothing operator is convolution with a compactly
//! supported kernel, and `dg = rhs` is solved mode by mode.

mod deposit;
mod fft;
mod field;
mod grid;
mod mollifier;
mod ops;
mod solve;

pub use crate::chains::pair_with_cycle;
pub use deposit::{chain_moments, chain_to_spectral};
pub use fft::{fft_nd, forward_components, inverse_components};
pub use field::{FieldForm, Representation};
pub use grid::Grid;
pub use mollifier::{Mollifier, MollifierProfile, TorusBox};
pub(crate) use ops::op_from;
pub use ops::{lift_pointwise, pointwise_reference, Lifted, PointwiseOp, DLAMBDA_AGREEMENT_TOL};
pub use solve::solve_d;

#[cfg(test)]
mod tests;
