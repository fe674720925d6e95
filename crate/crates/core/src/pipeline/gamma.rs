//! Segment approximation of the 1-current `ω^k ∧ C`.

use nalgebra::DVector;

use crate::chains::{PolyChain, Simplex};
use crate::error::{Error, Result};
use crate::exteralg::{lefschetz_l_pow, wedge, PointwiseForm};

/// `ω^k` in `n` degrees of freedom.
pub fn omega_power(n: usize, k: usize) -> Result<PointwiseForm> {
    lefschetz_l_pow(&PointwiseForm::scalar(n, 1.0), k)
}

/// Segments approximating `ω^k ∧ C` for a `(2k+1)`-chain `C`.
///
/// On a simplex `τ` of the `m`-fold subdivision of `C` the current has the
/// constant vector density `v_j = (ω^k ∧ e^j)(ξ)`, `ξ` the unit tangent of
/// `τ`. It is replaced by the chord of `τ` through its centroid along `v`,
/// of length `ℓ`, with weight `vol(τ) |v| / ℓ`, which matches every constant
/// 1-form exactly.
pub fn discretize_wedge(c: &PolyChain, k: usize, m: usize) -> Result<PolyChain> {
    let nn = c.ambient();
    if nn % 2 != 0 {
        return Err(Error::Dimension {
            expected: nn + 1,
            found: nn,
        });
    }
    let n = nn / 2;
    if c.dim() != 2 * k + 1 {
        return Err(Error::Unsupported(format!(
            "ω^{k} ∧ C is a segment current only for dim C = {}, got {}",
            2 * k + 1,
            c.dim()
        )));
    }
    let wk = omega_power(n, k)?;
    let probes: Vec<PointwiseForm> = (1..=nn)
        .map(|j| wedge(&wk, &PointwiseForm::basis(n, &[j])?))
        .collect::<Result<_>>()?;
    let mut out = PolyChain::new(nn, 1);
    for (a, tau) in c.subdivide(m.max(1)).terms() {
        let vol = tau.volume();
        if vol <= 0.0 {
            continue;
        }
        let single = PolyChain::simplex(tau.clone());
        let v: Vec<f64> = probes
            .iter()
            .map(|f| Ok(single.evaluate_constant(f)? / vol))
            .collect::<Result<_>>()?;
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= 1e-14 {
            continue;
        }
        let dir: Vec<f64> = v.iter().map(|x| x / norm).collect();
        let half = chord_half_length(tau, &dir)?;
        let ctr = tau.centroid();
        let ends: Vec<Vec<f64>> = [-half, half]
            .iter()
            .map(|t| ctr.iter().zip(&dir).map(|(x, d)| x + t * d).collect())
            .collect();
        out.push(a * vol * norm / (2.0 * half), Simplex::new(ends)?)?;
    }
    Ok(out)
}

/// Largest `t` with `centroid ± t·dir` inside the simplex.
fn chord_half_length(tau: &Simplex, dir: &[f64]) -> Result<f64> {
    let e = tau.edges();
    let m = e.ncols();
    let rhs = DVector::from_column_slice(dir);
    let svd = e.clone().svd(true, true);
    let coef = svd.solve(&rhs, 1e-13).map_err(|s| Error::Consistency {
        what: s.into(),
        residual: f64::NAN,
        tol: 0.0,
    })?;
    let miss = (&e * &coef - &rhs).norm();
    if miss > 1e-9 {
        return Err(Error::Consistency {
            what: "density direction leaves the tangent space of the filling".into(),
            residual: miss,
            tol: 1e-9,
        });
    }
    let mut bary = vec![-coef.sum()];
    bary.extend(coef.iter());
    let share = 1.0 / (m + 1) as f64;
    let t = bary
        .iter()
        .filter(|b| b.abs() > 1e-14)
        .map(|b| share / b.abs())
        .fold(f64::INFINITY, f64::min);
    if !t.is_finite() {
        return Err(Error::domain("zero chord direction"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testforms::{battery, BatterySpec};

    fn slab() -> PolyChain {
        PolyChain::coordinate_box(&[0.3, 0.25, 0.35, 0.5], &[(0, 0.3), (2, 0.3), (1, 0.03125)])
            .unwrap()
    }

    #[test]
    fn segments_follow_the_density() {
        let c = slab();
        let g = discretize_wedge(&c, 1, 2).unwrap();
        assert_eq!(g.len(), 48);
        // Every segment runs along x_2.
        for (_, s) in g.terms() {
            let v = s.vertices();
            assert!((v[0][0] - v[1][0]).abs() < 1e-15 && (v[0][1] - v[1][1]).abs() < 1e-15);
            assert!((v[0][3] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_forms_agree_exactly() {
        let c = slab();
        let g = discretize_wedge(&c, 1, 2).unwrap();
        let w = omega_power(2, 1).unwrap();
        for j in 1..=4 {
            let e = PointwiseForm::basis(2, &[j]).unwrap();
            let exact = c.evaluate_constant(&wedge(&w, &e).unwrap()).unwrap();
            let approx = g.evaluate_constant(&e).unwrap();
            assert!((exact - approx).abs() < 1e-15, "{j}: {exact} vs {approx}");
        }
    }

    #[test]
    fn refinement_converges_on_waves() {
        let c = PolyChain::coordinate_box(&[0.1, 0.2, 0.3, 0.4], &[(0, 0.4), (1, 0.3), (2, 0.5)])
            .unwrap();
        let w = omega_power(2, 1).unwrap();
        let spec = BatterySpec {
            count: 5,
            ..Default::default()
        };
        let forms = battery(4, 1, &spec);
        let err = |m: usize| {
            let g = discretize_wedge(&c, 1, m).unwrap();
            forms
                .iter()
                .map(|phi| {
                    let exact = c.evaluate_trig(&phi.wedge_left(&w).unwrap()).unwrap();
                    (exact - g.evaluate_trig(phi).unwrap()).abs()
                })
                .fold(0.0, f64::max)
        };
        let (e2, e4) = (err(2), err(4));
        assert!(e4 < 0.5 * e2, "{e2} -> {e4}");
    }

    #[test]
    fn wrong_dimension_is_unsupported() {
        let c = PolyChain::coordinate_box(&[0.0; 4], &[(0, 1.0), (1, 1.0)]).unwrap();
        assert!(matches!(
            discretize_wedge(&c, 1, 1),
            Err(Error::Unsupported(_))
        ));
    }
}
