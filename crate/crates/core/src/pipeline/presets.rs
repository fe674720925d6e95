//! Ready-made configurations on `T^2` and `T^4`.

use super::{PipelineConfig, Tolerances};
use crate::chains::{PolyChain, Simplex};
use crate::error::{Error, Result};
use crate::torusfields::Mollifier;

pub const PRESET_NAMES: [&str; 3] = ["t2_circle", "t4_lagrangian", "t4_bumped"];

const EPS: f64 = 1.0 / 32.0;

/// A named configuration.
pub fn preset(name: &str) -> Result<PipelineConfig> {
    match name {
        "t2_circle" => t2_circle(),
        "t4_lagrangian" => t4_lagrangian(),
        "t4_bumped" => t4_bumped(),
        _ => Err(Error::domain(format!(
            "unknown preset {name:?}, expected one of {PRESET_NAMES:?}"
        ))),
    }
}

/// The circle `y = 0.3` in `T^2`.
fn t2_circle() -> Result<PipelineConfig> {
    let q = PolyChain::simplex(Simplex::new(vec![vec![0.0, 0.3], vec![1.0, 0.3]])?);
    Ok(PipelineConfig {
        name: "t2_circle".into(),
        n: 1,
        resolution: 64,
        p: 1,
        q,
        filling: None,
        epsilon: EPS,
        deform_offset: None,
        pinned_axes: Vec::new(),
        mollifier: Mollifier::truncated_gaussian(0.25, 7.5)?,
        tolerances: Tolerances::default(),
        battery_size: 50,
        subdivision: 2,
        seed: 1,
    })
}

fn lagrangian_torus() -> Result<PolyChain> {
    PolyChain::coordinate_box(&[0.0, 0.25, 0.0, 0.5], &[(0, 1.0), (2, 1.0)])
}

/// The Lagrangian torus `{y_1 = 1/4, y_2 = 1/2}` in `T^4`.
fn t4_lagrangian() -> Result<PipelineConfig> {
    Ok(PipelineConfig {
        name: "t4_lagrangian".into(),
        n: 2,
        resolution: 32,
        p: 2,
        q: lagrangian_torus()?,
        filling: None,
        epsilon: EPS,
        deform_offset: None,
        pinned_axes: vec![1, 3],
        mollifier: Mollifier::truncated_gaussian(0.45, 6.5)?,
        tolerances: Tolerances::default(),
        battery_size: 50,
        subdivision: 2,
        seed: 2,
    })
}

/// The Lagrangian torus with a thin box glued on, `Q' = Q + ∂C`. The box
/// leaves `y_1` by one grid step, so `ω ∧ Q' ≠ 0`.
fn t4_bumped() -> Result<PipelineConfig> {
    let c = PolyChain::coordinate_box(&[0.3, 0.25, 0.35, 0.5], &[(0, 0.3), (2, 0.3), (1, EPS)])?;
    let q = lagrangian_torus()?.add(&c.boundary())?.canonicalize();
    Ok(PipelineConfig {
        name: "t4_bumped".into(),
        n: 2,
        resolution: 32,
        p: 2,
        q,
        filling: Some(c),
        epsilon: EPS,
        deform_offset: Some(vec![0.0123, 0.0, 0.0071, 0.0]),
        pinned_axes: vec![1, 3],
        mollifier: Mollifier::truncated_gaussian(0.45, 6.5)?,
        tolerances: Tolerances::default(),
        battery_size: 50,
        subdivision: 2,
        seed: 3,
    })
}
