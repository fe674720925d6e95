//! Exact integrals of plane waves over simplices.
//!
//! By the Hermite–Genocchi formula `∫_{Δ_p} e^{i Σ z_j t_j} dt` is the divided
//! difference of `exp` at the nodes `0, i z_1, .., i z_p`. It is read off the
//! exponential of the bidiagonal matrix with the nodes on its diagonal, which
//! stays accurate when nodes coalesce.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// `∫` over the standard `p`-simplex `{t ≥ 0, Σ t ≤ 1}` of `e^{i z·t}`.
pub fn simplex_exp_integral(z: &[f64]) -> Complex64 {
    let p = z.len();
    match p {
        0 => Complex64::new(1.0, 0.0),
        1 => {
            let a = z[0];
            let h = 0.5 * a;
            let sinc = if h.abs() < 1e-4 {
                1.0 - h * h / 6.0 + h.powi(4) / 120.0
            } else {
                h.sin() / h
            };
            Complex64::from_polar(sinc, h)
        }
        2 if separated(z[0], z[1]) => {
            let (za, zb) = (Complex64::new(0.0, z[0]), Complex64::new(0.0, z[1]));
            ((zb.exp() - 1.0) / zb - (za.exp() - 1.0) / za) / (zb - za)
        }
        _ => {
            let m = p + 1;
            let mut j = DMatrix::<Complex64>::zeros(m, m);
            for (r, &zr) in z.iter().enumerate() {
                j[(r + 1, r + 1)] = Complex64::new(0.0, zr);
            }
            for r in 0..p {
                j[(r, r + 1)] = Complex64::new(1.0, 0.0);
            }
            let e = j.exp();
            e[(0, p)]
        }
    }
}

/// Nodes `0, ia, ib` far enough apart for the closed-form divided difference.
fn separated(a: f64, b: f64) -> bool {
    a.abs().min(b.abs()).min((a - b).abs()) > 0.25
}
