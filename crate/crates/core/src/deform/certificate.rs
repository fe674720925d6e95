//! Independent checks of a deformation: support distances, the current
//! identity against a battery of test forms, and skeletality of `P`.

use serde::{Deserialize, Serialize};

use super::{DeformResult, GridSpec};
use crate::chains::{PolyChain, SupportSet};
use crate::error::{Error, Result};
use crate::testforms::{battery, BatterySpec, TrigForm};

/// Battery residual bound, relative to `1 + mass scale`.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Distance of a simplex of `P` from a single grid `p`-face.
pub const SKELETAL_TOL: f64 = 1e-10;
/// Absolute slack on the support bound `2Nε`, relative to `ε`.
pub const SUPPORT_SLACK: f64 = 1e-9;

/// Largest sampled distance from a chain to a reference support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportCheck {
    pub max_distance: f64,
    pub witness: Option<Vec<f64>>,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `2Nε`.
    pub bound: f64,
    /// Distances of `supp P`, `supp R` to `supp T` and of `supp S` to `supp ∂T`.
    pub p_support: SupportCheck,
    pub r_support: SupportCheck,
    pub s_support: SupportCheck,
    /// `max |⟨T - P - ∂R - S, φ⟩|` over the battery.
    pub identity_residual: f64,
    pub identity_scale: f64,
    pub battery_size: usize,
    pub skeletal_defect: f64,
    pub mass_t: f64,
    pub mass_p: f64,
    pub mass_r: f64,
    pub mass_s: f64,
}

impl Certificate {
    /// First violated clause as a certification error.
    pub fn check(&self) -> Result<()> {
        let limit = self.bound * (1.0 + SUPPORT_SLACK);
        for (name, c) in [
            ("supp P vs supp T", &self.p_support),
            ("supp R vs supp T", &self.r_support),
            ("supp S vs supp ∂T", &self.s_support),
        ] {
            if c.max_distance > limit {
                return Err(Error::Certification {
                    what: format!("{name}: distance {} > {}", c.max_distance, self.bound),
                    witness: c.witness.clone().unwrap_or_default(),
                });
            }
        }
        if self.identity_residual > IDENTITY_TOL * self.identity_scale {
            return Err(Error::Certification {
                what: format!("T - P - ∂R - S residual {:e}", self.identity_residual),
                witness: Vec::new(),
            });
        }
        if self.skeletal_defect > SKELETAL_TOL {
            return Err(Error::Certification {
                what: format!("P off the skeleton by {:e}", self.skeletal_defect),
                witness: Vec::new(),
            });
        }
        Ok(())
    }

    pub fn passes(&self) -> bool {
        self.check().is_ok()
    }
}

/// Build the certificate of a decomposition with a battery drawn from `seed`.
pub fn certify(
    t: &PolyChain,
    g: &GridSpec,
    p: &PolyChain,
    r: &PolyChain,
    s: &PolyChain,
    seed: u64,
) -> Result<Certificate> {
    let forms = test_battery(g, t.dim(), seed);
    let (identity_residual, identity_scale) = identity_residual(t, p, r, s, &forms)?;
    let supp_t = SupportSet::new(t);
    let supp_bt = SupportSet::new(&t.boundary());
    Ok(Certificate {
        bound: g.support_bound(),
        p_support: support_check(g, p, &supp_t),
        r_support: support_check(g, r, &supp_t),
        s_support: support_check(g, s, &supp_bt),
        identity_residual,
        identity_scale,
        battery_size: forms.len(),
        skeletal_defect: skeletal_defect(p, g),
        mass_t: t.mass(),
        mass_p: p.mass(),
        mass_r: r.mass(),
        mass_s: s.mass(),
    })
}

/// Recompute the certificate of `res` with a fresh battery and fail on the
/// first violated clause.
pub fn verify_certificate(t: &PolyChain, g: &GridSpec, res: &DeformResult) -> Result<Certificate> {
    if g.ambient != res.grid.ambient || g.epsilon != res.grid.epsilon || g.period != res.grid.period
    {
        return Err(Error::Precondition(
            "result was produced on a different grid".into(),
        ));
    }
    let c = certify(
        t,
        &res.grid,
        &res.p,
        &res.r,
        &res.s,
        res.grid.seed ^ 0x5eed_cafe,
    )?;
    c.check()?;
    Ok(c)
}

/// `(max_φ |⟨T - P - ∂R - S, φ⟩|, 1 + M(T) + M(P) + M(∂R) + M(S))`.
pub fn identity_residual(
    t: &PolyChain,
    p: &PolyChain,
    r: &PolyChain,
    s: &PolyChain,
    forms: &[TrigForm],
) -> Result<(f64, f64)> {
    let dr = r.boundary();
    let dr = if dr.dim() == t.dim() {
        dr
    } else {
        PolyChain::new(t.ambient(), t.dim())
    };
    let mut worst: f64 = 0.0;
    for phi in forms {
        let v = t.evaluate_trig(phi)?
            - p.evaluate_trig(phi)?
            - dr.evaluate_trig(phi)?
            - s.evaluate_trig(phi)?;
        worst = worst.max(v.abs());
    }
    Ok((worst, 1.0 + t.mass() + p.mass() + dr.mass() + s.mass()))
}

/// Fifty random forms of degree `k`; lattice-periodic in torus mode.
fn test_battery(g: &GridSpec, k: usize, seed: u64) -> Vec<TrigForm> {
    let spec = BatterySpec {
        periodic: g.is_periodic(),
        seed,
        ..BatterySpec::default()
    };
    let mut forms = battery(g.ambient, k, &spec);
    if let Some(per) = &g.period {
        for f in &mut forms {
            for term in &mut f.terms {
                term.freq.iter_mut().zip(per).for_each(|(m, l)| *m /= l);
            }
        }
    }
    forms
}

fn support_check(g: &GridSpec, c: &PolyChain, reference: &SupportSet) -> SupportCheck {
    let mut check = SupportCheck {
        max_distance: 0.0,
        witness: None,
        samples: 0,
    };
    if c.is_empty() {
        return check;
    }
    let n = g.ambient;
    let pts = reference.points();
    let lo: Vec<f64> = (0..n)
        .map(|j| pts.iter().map(|v| v[j]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..n)
        .map(|j| pts.iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let reach = 2.0 * g.support_bound();
    for (_, s) in c.terms() {
        for x in sample_points(s.vertices()) {
            check.samples += 1;
            let d = if reference.is_empty() {
                f64::INFINITY
            } else {
                g.translates(&x, &lo, &hi, reach)
                    .iter()
                    .map(|y| reference.distance(y))
                    .fold(f64::INFINITY, f64::min)
                    .min(reference.distance(&x))
            };
            if d > check.max_distance || check.witness.is_none() {
                check.max_distance = check.max_distance.max(d);
                check.witness = Some(x);
            }
        }
    }
    check
}

/// Vertices, edge midpoints and the centroid.
fn sample_points(v: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = v.len();
    let mut out = v.to_vec();
    for i in 0..m {
        for j in i + 1..m {
            out.push(v[i].iter().zip(&v[j]).map(|(a, b)| 0.5 * (a + b)).collect());
        }
    }
    if m > 2 {
        out.push(
            (0..v[0].len())
                .map(|c| v.iter().map(|x| x[c]).sum::<f64>() / m as f64)
                .collect(),
        );
    }
    out
}

/// Largest distance of a simplex of `c` from the closest single grid face of
/// dimension `dim c`.
pub fn skeletal_defect(c: &PolyChain, g: &GridSpec) -> f64 {
    let n = g.ambient;
    let p = c.dim();
    let mut worst: f64 = 0.0;
    for (_, s) in c.terms() {
        let v = s.vertices();
        let mut dev: Vec<(f64, usize)> = (0..n)
            .map(|j| {
                let k = ((v[0][j] - g.offset[j]) / g.epsilon).round() as i64;
                let x = g.line(j, k);
                (v.iter().map(|w| (w[j] - x).abs()).fold(0.0, f64::max), j)
            })
            .collect();
        dev.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut d = dev[..n - p].iter().map(|e| e.0).fold(0.0, f64::max);
        for &(_, j) in &dev[n - p..] {
            let lo = v.iter().map(|w| w[j]).fold(f64::INFINITY, f64::min);
            let hi = v.iter().map(|w| w[j]).fold(f64::NEG_INFINITY, f64::max);
            let z = g.cell_index(j, 0.5 * (lo + hi));
            d = d.max(g.line(j, z) - lo).max(hi - g.line(j, z + 1));
        }
        worst = worst.max(d);
    }
    worst
}
