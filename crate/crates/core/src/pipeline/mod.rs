//! Primitive currents cohomologous to a cycle, with symplectic Harmonic
//! smoothings that vanish on an open ball.
//!
//! For a `(2n - p)`-cycle `Q` and `k = n - p + 1` the current
//! `W = ω^k ∧ Q` is exact. If it vanishes, `T = Q`. Otherwise a filling
//! chain `C` with `ω^k ∧ (Q - ∂C) = 0` gives `Γ = ±ω^k ∧ C` with `dΓ = W`.
//! A segment approximation `Γ_h` is deformed to `P + ∂R + S` on the grid,
//! `B = L^{-k}(P + S + Γ - Γ_h)` satisfies `d(ω^k ∧ B) = W`, and
//! `T = Q - dB` is closed and primitive. All currents are smoothed by the
//! mollifier, which commutes with `d` and `L`, so the smoothing of `T` is
//! a symplectic Harmonic form in the class of `Q`.
//!
//! The grid of the deformation is lattice-periodic, so the fundamental
//! domain stands in for an embedding of the torus.

mod gamma;
mod presets;
mod support;
#[cfg(test)]
mod tests;
mod thom;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chains::{CurrentRep, PolyChain, TestForm};
use crate::currents::DualCurrent;
use crate::deform::{deform, verify_certificate, Certificate, DeformResult, GridSpec};
use crate::error::{Error, Result};
use crate::exteralg::blade::blades_of_grade;
use crate::exteralg::{wedge, PointwiseForm};
use crate::testforms::{battery, BatterySpec};
use crate::torusfields::{FieldForm, Grid, Mollifier};

pub use gamma::{discretize_wedge, omega_power};
pub use presets::{preset, PRESET_NAMES};
pub use support::{
    chain_boxes, largest_empty_ball, lefschetz_decompose_b, BSupportReport, ComponentSupport,
    EmptyBall,
};
pub use thom::{thom_checks, Subtorus, ThomBranch, ThomReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// End-to-end battery residuals, relative to `1 + max |Q(φ)|`.
    pub battery: f64,
    /// Intermediate identities, relative to the size of their terms.
    pub step: f64,
    /// Pointwise norm on the empty ball.
    pub vanish: f64,
    pub harmonic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            battery: 1e-6,
            step: 1e-8,
            vanish: 1e-8,
            harmonic: 1e-6,
        }
    }
}

fn default_battery() -> usize {
    50
}

fn default_subdivision() -> usize {
    2
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub name: String,
    /// Half the dimension of the torus.
    pub n: usize,
    /// Nodes per axis of the field grid.
    pub resolution: usize,
    /// Degree of the dual class; `Q` has dimension `2n - p`.
    pub p: usize,
    #[serde(rename = "Q")]
    pub q: PolyChain,
    /// `C` with `ω^k ∧ (Q - ∂C) = 0`, needed when `ω^k ∧ Q ≠ 0`.
    #[serde(default)]
    pub filling: Option<PolyChain>,
    /// Scale of the deformation grid; the unit period must be a multiple.
    pub epsilon: f64,
    /// Offset of the deformation grid; drawn from `seed` when absent.
    #[serde(default)]
    pub deform_offset: Option<Vec<f64>>,
    /// Axes whose deformation offset is kept on resampling (0-based).
    #[serde(default)]
    pub pinned_axes: Vec<usize>,
    pub mollifier: Mollifier,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_battery")]
    pub battery_size: usize,
    /// Edgewise subdivision of `C` before it is replaced by segments.
    #[serde(default = "default_subdivision")]
    pub subdivision: usize,
    #[serde(default)]
    pub seed: u64,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::domain("torus of dimension 0"));
        }
        if self.p == 0 || self.p > n {
            return Err(Error::domain(format!(
                "degree p = {} outside 1..={n}",
                self.p
            )));
        }
        if self.q.ambient() != 2 * n {
            return Err(Error::Dimension {
                expected: 2 * n,
                found: self.q.ambient(),
            });
        }
        if self.q.dim() != 2 * n - self.p {
            return Err(Error::domain(format!(
                "Q has dimension {}, expected 2n - p = {}",
                self.q.dim(),
                2 * n - self.p
            )));
        }
        if self.resolution < 4 || !self.resolution.is_power_of_two() {
            return Err(Error::domain(format!(
                "resolution {} must be a power of two, at least 4",
                self.resolution
            )));
        }
        if let Some(c) = &self.filling {
            if c.ambient() != 2 * n || c.dim() != 2 * n - self.p + 1 {
                return Err(Error::domain(format!(
                    "filling chain of dimension {} in R^{}, expected {} in R^{}",
                    c.dim(),
                    c.ambient(),
                    2 * n - self.p + 1,
                    2 * n
                )));
            }
        }
        Mollifier::new(self.mollifier.width(), self.mollifier.profile())?;
        self.grid_spec()?;
        let bq = torus_boundary(&self.q);
        if bq.mass() > 1e-12 * (1.0 + self.q.mass()) {
            return Err(Error::Precondition(format!(
                "Q is not a cycle on the torus (boundary mass {:e})",
                bq.mass()
            )));
        }
        Ok(())
    }

    /// `k = n - p + 1`.
    pub fn k(&self) -> usize {
        self.n - self.p + 1
    }

    pub fn battery_spec(&self) -> BatterySpec {
        BatterySpec {
            count: self.battery_size,
            seed: self.seed ^ 0x0b5e_55ed,
            ..BatterySpec::default()
        }
    }

    /// The lattice-periodic deformation grid.
    pub fn grid_spec(&self) -> Result<GridSpec> {
        let nn = 2 * self.n;
        let g = match &self.deform_offset {
            Some(o) => GridSpec::new(nn, self.epsilon)?
                .with_offset(o.clone())?
                .with_seed(self.seed),
            None => GridSpec::seeded(nn, self.epsilon, self.seed)?,
        };
        g.with_period(vec![1.0; nn])?
            .with_pinned(self.pinned_axes.clone())
    }

    pub fn from_json<R: std::io::Read>(r: R) -> Result<PipelineConfig> {
        let cfg: PipelineConfig = serde_json::from_reader(r)?;
        Ok(cfg)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Branch {
    /// `ω^k ∧ Q` vanishes and `T = Q`.
    ShortCircuit { reason: String },
    /// `Γ`, deformation and inversion were carried out; `Γ = sign·ω^k ∧ C`.
    FullPath { sign: f64 },
}

/// One verified identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepCheck {
    pub name: String,
    /// `field` (sup norm on the grid) or `battery` (test-form evaluation).
    pub route: String,
    pub residual: f64,
    pub scale: f64,
    pub tol: f64,
    pub passed: bool,
}

impl StepCheck {
    fn new(name: &str, route: &str, residual: f64, scale: f64, tol: f64) -> StepCheck {
        StepCheck {
            name: name.into(),
            route: route.into(),
            residual,
            scale,
            tol,
            passed: residual <= tol * scale,
        }
    }
}

/// `⟨Q, φ⟩` against `⟨T, φ⟩` for a closed test form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassPairing {
    /// 1-based indices of the constant form `e^I`, or empty for the
    /// largest deviation over exact battery forms.
    pub form: Vec<usize>,
    pub q: f64,
    pub t: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicCheck {
    pub d_sup: f64,
    pub dlambda_sup: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Masses {
    pub q: f64,
    pub filling: f64,
    pub gamma_h: f64,
    pub p: f64,
    pub r: f64,
    pub s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub step: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub name: String,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub resolution: usize,
    pub branch: Branch,
    pub steps: Vec<StepCheck>,
    pub class_pairings: Vec<ClassPairing>,
    pub class_tol: f64,
    pub harmonic: HarmonicCheck,
    pub empty_ball: Option<EmptyBall>,
    pub b_support: Option<BSupportReport>,
    pub certificate: Option<Certificate>,
    pub deform_retries: usize,
    pub masses: Masses,
    pub timings: Vec<Timing>,
    pub artifacts: Vec<String>,
    pub passed: bool,
}

impl PipelineReport {
    /// The first failed claim, if any.
    pub fn failure(&self) -> Option<String> {
        if let Some(s) = self.steps.iter().find(|s| !s.passed) {
            return Some(format!(
                "{} ({}): {:e} > {:e}",
                s.name,
                s.route,
                s.residual,
                s.tol * s.scale
            ));
        }
        if let Some(c) = self
            .class_pairings
            .iter()
            .find(|c| (c.q - c.t).abs() > self.class_tol)
        {
            return Some(format!("class pairing {:?}: {} vs {}", c.form, c.q, c.t));
        }
        if !self.harmonic.passed {
            return Some(format!(
                "not Harmonic: |dF| = {:e}, |d^Λ F| = {:e}",
                self.harmonic.d_sup, self.harmonic.dlambda_sup
            ));
        }
        match &self.empty_ball {
            None => return Some("the final form vanishes on no grid node".into()),
            Some(b) if b.radius_cells < 1 => {
                return Some("no empty ball of radius one cell".into())
            }
            _ => {}
        }
        if let Some(b) = &self.b_support {
            if let Err(e) = b.check() {
                return Some(e.to_string());
            }
        }
        None
    }
}

/// The report together with the fields and chains it was computed from.
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub report: PipelineReport,
    /// The smoothing of `T`.
    pub final_form: FieldForm,
    pub b: Option<FieldForm>,
    pub q: PolyChain,
    pub gamma_h: Option<PolyChain>,
    pub deformation: Option<DeformResult>,
}

impl PipelineOutput {
    /// Write the fields (`.sff`), chains and deformation (JSON) to `dir`
    /// and record their paths in the report.
    pub fn write_artifacts(&mut self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        let mut put = |name: &str, f: &mut dyn FnMut(std::fs::File) -> Result<()>| -> Result<()> {
            let path = dir.join(name);
            f(std::fs::File::create(&path)?)?;
            paths.push(path);
            Ok(())
        };
        put("final_form.sff", &mut |w| {
            self.final_form.write_sff(std::io::BufWriter::new(w))
        })?;
        put("q.json", &mut |w| self.q.write_json(w))?;
        if let Some(b) = &self.b {
            put("b.sff", &mut |w| b.write_sff(std::io::BufWriter::new(w)))?;
        }
        if let Some(g) = &self.gamma_h {
            put("gamma_h.json", &mut |w| g.write_json(w))?;
        }
        if let Some(d) = &self.deformation {
            put("deformation.json", &mut |w| {
                Ok(serde_json::to_writer(w, d)?)
            })?;
        }
        self.report.artifacts = paths.iter().map(|p| p.display().to_string()).collect();
        Ok(paths)
    }
}

/// Run the construction and all of its checks.
pub fn run(cfg: &PipelineConfig) -> Result<PipelineReport> {
    Ok(run_full(cfg)?.report)
}

struct Clock {
    last: Instant,
    out: Vec<Timing>,
}

impl Clock {
    fn new() -> Clock {
        Clock {
            last: Instant::now(),
            out: Vec::new(),
        }
    }

    fn lap(&mut self, step: &str) {
        let now = Instant::now();
        self.out.push(Timing {
            step: step.into(),
            seconds: (now - self.last).as_secs_f64(),
        });
        self.last = now;
    }
}

fn require(step: &StepCheck) -> Result<()> {
    if step.passed {
        Ok(())
    } else {
        Err(Error::Consistency {
            what: format!("{} ({} route)", step.name, step.route),
            residual: step.residual,
            tol: step.tol * step.scale,
        })
    }
}

fn field_current(f: &FieldForm) -> Result<DualCurrent> {
    DualCurrent::new(CurrentRep::field(f.clone()))
}

/// `max_φ |Σ c_i T_i(φ)|` over a battery of the common dimension.
fn battery_residual(
    parts: &[(f64, &DualCurrent)],
    forms: &[crate::testforms::TrigForm],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for f in forms {
        let phi = TestForm::Trig(f.clone());
        let mut v = 0.0;
        for (c, t) in parts {
            if !t.terms().is_empty() {
                v += c * t.evaluate(&phi)?;
            }
        }
        worst = worst.max(v.abs());
    }
    Ok(worst)
}

/// Run the construction, returning the fields and chains as well.
pub fn run_full(cfg: &PipelineConfig) -> Result<PipelineOutput> {
    cfg.validate()?;
    let mut clock = Clock::new();
    let n = cfg.n;
    let nn = 2 * n;
    let p = cfg.p;
    let k = cfg.k();
    let tol = &cfg.tolerances;
    let grid = Grid::uniform(nn, cfg.resolution)?;
    let moll = cfg.mollifier;
    let spec = cfg.battery_spec();
    let wk = omega_power(n, k)?;
    let q = cfg.q.clone();
    let mq = q.mass();
    let mut steps = Vec::new();
    let mut masses = Masses {
        q: mq,
        ..Masses::default()
    };

    // The class of Q must be primitive: ω^k ∧ Q pairs to zero with every
    // constant form.
    if p >= 2 {
        for b in blades_of_grade(nn, p - 2) {
            let e = PointwiseForm::basis(n, &b.indices1())?;
            let v = q.evaluate_constant(&wedge(&wk, &e)?)?;
            if v.abs() > tol.step * (1.0 + mq) {
                return Err(Error::Precondition(format!(
                    "the class of Q is not primitive: ω^{k} ∧ Q pairs to {v:e} with e^{:?}",
                    b.indices1()
                )));
            }
        }
    }

    let w_rep = CurrentRep::wedge_constant(wk.clone(), q.clone());
    let w_battery = if p >= 2 {
        let forms = battery(nn, p - 2, &spec);
        let w = DualCurrent::new(w_rep.clone())?;
        battery_residual(&[(1.0, &w)], &forms)?
    } else {
        0.0
    };
    let smooth_q = moll.smooth_current(&CurrentRep::chain(q.clone()), &grid, None)?;
    clock.lap("smooth Q");

    let short = if p < 2 {
        Some(format!("ω^{k} ∧ Q has negative dimension"))
    } else if w_battery <= tol.step * (1.0 + mq) {
        Some(format!("ω^{k} ∧ Q vanishes on the battery ({w_battery:e})"))
    } else {
        None
    };

    let mut b_field = None;
    let mut gamma_h_out = None;
    let mut deformation = None;
    let mut b_support = None;
    let branch;
    let final_form = if let Some(reason) = short {
        if p >= 2 {
            let w_field = moll.smooth_current(&w_rep, &grid, None)?;
            let st = StepCheck::new(
                "ω^k ∧ Q = 0",
                "field",
                w_field.sup_norm(),
                1.0 + smooth_q.sup_norm(),
                tol.step,
            );
            require(&st)?;
            steps.push(st);
        }
        branch = Branch::ShortCircuit { reason };
        smooth_q.clone()
    } else {
        let c = cfg.filling.clone().ok_or_else(|| {
            Error::Precondition(format!(
                "ω^{k} ∧ Q is not zero (battery {w_battery:e}) and no filling chain was given"
            ))
        })?;
        if p != 2 {
            return Err(Error::Unsupported(format!(
                "Γ of dimension {} (only segment currents are discretized)",
                p - 1
            )));
        }
        masses.filling = c.mass();
        let w_field = moll.smooth_current(&w_rep, &grid, None)?;
        let c_rep = CurrentRep::wedge_constant(wk.clone(), c.clone());
        let gamma_raw = moll.smooth_current(&c_rep, &grid, None)?;
        let dgamma = gamma_raw.d()?;
        let plus = dgamma.max_diff(&w_field)?;
        let minus = dgamma.scale(-1.0).max_diff(&w_field)?;
        let sign = if plus <= minus { 1.0 } else { -1.0 };
        let gamma_field = gamma_raw.scale(sign);
        let w_scale = 1.0 + w_field.sup_norm();
        let st = StepCheck::new("dΓ = ω^k ∧ Q", "field", plus.min(minus), w_scale, tol.step);
        require(&st)?;
        steps.push(st);
        let forms_w = battery(nn, p - 2, &spec);
        let w_cur = DualCurrent::new(w_rep.clone())?;
        let dgamma_cur = DualCurrent::new(c_rep.clone())?.d().scale(sign);
        let res = battery_residual(&[(1.0, &dgamma_cur), (-1.0, &w_cur)], &forms_w)?;
        let st = StepCheck::new(
            "dΓ = ω^k ∧ Q",
            "battery",
            res,
            1.0 + mq + c.mass(),
            tol.step,
        );
        require(&st)?;
        steps.push(st);
        clock.lap("filling");

        let gamma_h = discretize_wedge(&c, k, cfg.subdivision)?.scale(sign);
        masses.gamma_h = gamma_h.mass();
        let gs = cfg.grid_spec()?;
        let def = deform(&gamma_h, &gs)?;
        let cert = verify_certificate(&gamma_h, &gs, &def)?;
        steps.push(StepCheck::new(
            "Γ_h = P + ∂R + S",
            "battery",
            cert.identity_residual,
            cert.identity_scale,
            crate::deform::IDENTITY_TOL,
        ));
        masses.p = def.p.mass();
        masses.r = def.r.mass();
        masses.s = def.s.mass();
        clock.lap("deform");

        let ps = def.p.add(&def.s)?;
        let smooth_ps = moll.smooth_current(&CurrentRep::chain(ps.clone()), &grid, None)?;
        let smooth_gh = moll.smooth_current(&CurrentRep::chain(gamma_h.clone()), &grid, None)?;
        let g_field = gamma_field.add(&smooth_ps)?.sub(&smooth_gh)?;
        let st = StepCheck::new(
            "d(P + S + Γ - Γ_h) = ω^k ∧ Q",
            "field",
            g_field.d()?.max_diff(&w_field)?,
            w_scale,
            tol.step,
        );
        require(&st)?;
        steps.push(st);
        let ps_cur = DualCurrent::new(CurrentRep::chain(ps.clone()))?.d();
        let gh_cur = DualCurrent::new(CurrentRep::chain(gamma_h.clone()))?.d();
        let res = battery_residual(
            &[
                (1.0, &ps_cur),
                (1.0, &dgamma_cur),
                (-1.0, &gh_cur),
                (-1.0, &w_cur),
            ],
            &forms_w,
        )?;
        let st = StepCheck::new(
            "d(P + S + Γ - Γ_h) = ω^k ∧ Q",
            "battery",
            res,
            1.0 + mq + c.mass() + ps.mass() + gamma_h.mass(),
            tol.step,
        );
        require(&st)?;
        steps.push(st);
        clock.lap("smooth P + S");

        let b = g_field.invert_l_power(k)?;
        let g_scale = 1.0 + g_field.sup_norm();
        let st = StepCheck::new(
            "ω^k ∧ B = P + S + Γ - Γ_h",
            "field",
            b.lefschetz_l_pow(k)?.max_diff(&g_field)?,
            g_scale,
            tol.step,
        );
        require(&st)?;
        steps.push(st);
        let forms_b = battery(nn, nn - (n + k), &spec);
        let lb = field_current(&b)?.l_pow(k)?;
        let g_cur = field_current(&g_field)?;
        let res = battery_residual(&[(1.0, &lb), (-1.0, &g_cur)], &forms_b)?;
        let st = StepCheck::new(
            "ω^k ∧ B = P + S + Γ - Γ_h",
            "battery",
            res,
            g_scale,
            tol.step,
        );
        require(&st)?;
        steps.push(st);

        let margin = moll.width() + grid.spacing(0);
        let mut region = chain_boxes(&ps, margin);
        region.extend(chain_boxes(&gamma_h, margin));
        region.extend(chain_boxes(&c, margin));
        let (_, rep) = lefschetz_decompose_b(&b, &region, tol.vanish)?;
        b_support = Some(rep);
        clock.lap("invert");

        let f = smooth_q.sub(&b.d()?)?;
        branch = Branch::FullPath { sign };
        b_field = Some(b);
        gamma_h_out = Some(gamma_h);
        deformation = Some(def);
        f
    };

    // End-to-end checks on T, represented by its smoothing.
    let t = field_current(&final_form)?;
    let forms_q = battery(nn, nn - p, &spec);
    let qc = DualCurrent::new(CurrentRep::chain(q.clone()))?;
    let q_scale = 1.0 + battery_residual(&[(1.0, &qc)], &forms_q)?;
    let forms_dt = battery(nn, nn - p - 1, &spec);
    let dt = t.d();
    steps.push(StepCheck::new(
        "dT = 0",
        "battery",
        battery_residual(&[(1.0, &dt)], &forms_dt)?,
        q_scale,
        tol.battery,
    ));
    if p + 2 * k <= nn {
        let lt = t.l_pow(k)?;
        let forms_lt = battery(nn, nn - p - 2 * k, &spec);
        let res = battery_residual(&[(1.0, &lt)], &forms_lt)?;
        steps.push(StepCheck::new(
            "ω^k ∧ T = 0",
            "battery",
            res,
            q_scale,
            tol.battery,
        ));
        let res = final_form.lefschetz_l_pow(k)?.sup_norm();
        steps.push(StepCheck::new(
            "ω^k ∧ T = 0",
            "field",
            res,
            1.0 + final_form.sup_norm(),
            tol.battery,
        ));
    }
    let mut class_pairings = Vec::new();
    for b in blades_of_grade(nn, nn - p) {
        let e = PointwiseForm::basis(n, &b.indices1())?;
        class_pairings.push(ClassPairing {
            form: b.indices1(),
            q: q.evaluate_constant(&e)?,
            t: t.evaluate(&TestForm::Constant(e))?,
        });
    }
    if p < nn {
        let forms_ex = battery(nn, nn - p - 1, &spec);
        let (mut dq, mut dtv) = (0.0f64, 0.0f64);
        for psi in &forms_ex {
            let phi = TestForm::Trig(psi.d());
            let a = qc.evaluate(&phi)?;
            let b = t.evaluate(&phi)?;
            if (a - b).abs() > (dq - dtv).abs() {
                dq = a;
                dtv = b;
            }
        }
        class_pairings.push(ClassPairing {
            form: Vec::new(),
            q: dq,
            t: dtv,
        });
    }
    let d_sup = if p < nn {
        final_form.d()?.sup_norm()
    } else {
        0.0
    };
    let dlambda_sup = final_form.dlambda()?.sup_norm();
    let harmonic = HarmonicCheck {
        d_sup,
        dlambda_sup,
        tol: tol.harmonic,
        passed: final_form.is_harmonic(tol.harmonic)?,
    };
    let empty_ball = largest_empty_ball(&final_form, tol.vanish);
    clock.lap("verify");

    let certificate = deformation
        .as_ref()
        .map(|d: &DeformResult| d.certificate.clone());
    let mut report = PipelineReport {
        name: cfg.name.clone(),
        n,
        p,
        k,
        resolution: cfg.resolution,
        branch,
        steps,
        class_pairings,
        class_tol: tol.battery * q_scale,
        harmonic,
        empty_ball,
        b_support,
        deform_retries: deformation.as_ref().map_or(0, |d| d.retries),
        certificate,
        masses,
        timings: clock.out,
        artifacts: Vec::new(),
        passed: false,
    };
    report.passed = report.failure().is_none();
    Ok(PipelineOutput {
        report,
        final_form,
        b: b_field,
        q,
        gamma_h: gamma_h_out,
        deformation,
    })
}

/// `∂c` with every simplex translated by a lattice vector so that its
/// centroid lies in `[0, 1)^N`, merged.
fn torus_boundary(c: &PolyChain) -> PolyChain {
    let b = c.boundary();
    let mut out = PolyChain::new(b.ambient(), b.dim());
    for (a, s) in b.terms() {
        let shift: Vec<f64> = s.centroid().iter().map(|x| -x.floor()).collect();
        let moved = s.map_vertices(|v| v.iter().zip(&shift).map(|(x, t)| x + t).collect());
        out.push(*a, moved).expect("same shape");
    }
    out.canonicalize()
}
