//! Multi-dimensional FFTs over component-major field storage.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::Grid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place transform of one scalar grid function.
///
/// Forward transforms are normalized by the node count, so the forward
/// output holds the coefficients `f̂_m` of `f(x) = Σ_m f̂_m e^{2πi m·x}`.
pub fn fft_nd(grid: &Grid, data: &mut [Complex64], inverse: bool) {
    let nodes = grid.nodes();
    let mut lines = vec![Complex64::new(0.0, 0.0); nodes];
    for axis in 0..grid.axes() {
        let len = grid.shape()[axis];
        let stride = grid.stride(axis);
        let fft = PLANNER.with(|p| {
            let mut p = p.borrow_mut();
            if inverse {
                p.plan_fft_inverse(len)
            } else {
                p.plan_fft_forward(len)
            }
        });
        let block = stride * len;
        // Gather every line along `axis` contiguously and transform them in one batch.
        let mut k = 0;
        for base in (0..nodes).step_by(block) {
            for off in 0..stride {
                for i in 0..len {
                    lines[k] = data[base + off + i * stride];
                    k += 1;
                }
            }
        }
        fft.process(&mut lines);
        let mut k = 0;
        for base in (0..nodes).step_by(block) {
            for off in 0..stride {
                for i in 0..len {
                    data[base + off + i * stride] = lines[k];
                    k += 1;
                }
            }
        }
    }
    if !inverse {
        let s = 1.0 / nodes as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }
}

/// Forward transform of real component-major data.
pub fn forward_components(grid: &Grid, real: &[f64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = real.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for chunk in out.chunks_mut(grid.nodes()) {
        fft_nd(grid, chunk, false);
    }
    out
}

/// Inverse transform to real component-major data (imaginary parts dropped).
pub fn inverse_components(grid: &Grid, spec: &[Complex64]) -> Vec<f64> {
    let mut tmp = spec.to_vec();
    for chunk in tmp.chunks_mut(grid.nodes()) {
        fft_nd(grid, chunk, true);
    }
    tmp.into_iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn single_mode() {
        let g = Grid::new(&[8, 4]).unwrap();
        let real: Vec<f64> = (0..g.nodes())
            .map(|i| {
                let x = g.coords(i);
                (2.0 * PI * (x[0] - 2.0 * x[1])).cos()
            })
            .collect();
        let spec = forward_components(&g, &real);
        let slot = g.linear_index(&[1, 2]);
        assert!((spec[slot].re - 0.5).abs() < 1e-14);
        let back = inverse_components(&g, &spec);
        for (a, b) in back.iter().zip(&real) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
