//! Time integration with adaptive step control, reparametrization and frame capture.

use serde::{Deserialize, Serialize};

use crate::geometry::{
    reparam_constant_speed, resample_constant_speed, CurveGeometry, GeometryError, Model, SampledCurve, SpeedWeight,
    Vec2,
};

use super::gradient::{GradientEval, GradientKind};
use super::monitors::SymmetryResiduals;
use super::step::{advance, check_nodes, end_position_error, end_tangent_error, impose_clamped, BoundaryCondition, ClampedData};
use super::FlowError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DtPolicy {
    Fixed,
    AdaptiveEnergyGuard,
}

/// Explicit-Euler stability constant of the discrete fourth-order operator: `dt ≤ C·Δs⁴`.
pub const STABILITY_CONSTANT: f64 = 2.0 / (2.0 * 256.0 / 9.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub n_nodes: usize,
    /// Step for the fixed policy, upper cap for the adaptive one.
    pub dt_initial: f64,
    pub dt_policy: DtPolicy,
    pub t_end: f64,
    pub bc: BoundaryCondition,
    pub clamped_data: Option<ClampedData>,
    /// Accepted steps between reparametrizations; 0 disables them.
    pub reparam_every: usize,
    pub singular_eps: f64,
    /// Accepted steps between stored frames.
    pub frame_every: usize,
    /// Arc length made uniform by the periodic reparametrization.
    pub reparam_speed: SpeedWeight,
    /// Initial `c` in `dt = c·Δs⁴`.
    pub guard_c0: f64,
    /// Hard cap on accepted steps.
    pub max_steps: Option<u64>,
    /// Descent direction used by each step.
    pub gradient: GradientKind,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            n_nodes: 128,
            dt_initial: 1e-3,
            dt_policy: DtPolicy::AdaptiveEnergyGuard,
            t_end: 1.0,
            bc: BoundaryCondition::Closed,
            clamped_data: None,
            reparam_every: 25,
            singular_eps: 1e-3,
            frame_every: 1000,
            reparam_speed: SpeedWeight::Euclidean,
            guard_c0: 0.1,
            max_steps: None,
            gradient: GradientKind::DiscreteEnergy,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<(), FlowError> {
        let bad = |m: &str| Err(FlowError::Config(m.to_string()));
        if self.n_nodes < 32 {
            return bad("n_nodes must be at least 32");
        }
        if !(self.dt_initial > 0.0 && self.dt_initial.is_finite()) {
            return bad("dt_initial must be positive");
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad("t_end must be a nonnegative number");
        }
        if !(self.singular_eps > 0.0 && self.singular_eps < 0.1) {
            return bad("singular_eps must lie in (0, 0.1)");
        }
        if self.frame_every == 0 {
            return bad("frame_every must be positive");
        }
        if !(self.guard_c0 > 0.0) {
            return bad("guard_c0 must be positive");
        }
        if self.bc == BoundaryCondition::Clamped && self.clamped_data.is_none() {
            return Err(FlowError::MissingClampedData);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowFrame {
    pub t: f64,
    /// Accepted steps taken before this frame.
    pub step: u64,
    #[serde(skip)]
    pub curve: Option<SampledCurve>,
    pub energy: f64,
    pub hyp_length: f64,
    pub euc_length: f64,
    /// `∫|∇E|_g² ds`.
    pub grad_norm_sq: f64,
    pub max_abs: f64,
    pub symmetry_residuals: Option<SymmetryResiduals>,
    /// Step size of the last accepted step and the stability bound `C·Δs⁴` at that time.
    pub dt: f64,
    pub dt_bound: f64,
    /// `−ΔE/dt` over the last accepted step.
    pub dissipation_rate: Option<f64>,
    /// Boundary data errors (position, tangent angle) for clamped runs.
    pub clamp_errors: Option<(f64, f64)>,
}

impl FlowFrame {
    pub fn curve(&self) -> &SampledCurve {
        self.curve.as_ref().expect("frame without curve")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedTEnd,
    SingularProximity,
    StepFailure,
    StepBudget,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::ReachedTEnd => "reached_t_end",
            Termination::SingularProximity => "singular_proximity",
            Termination::StepFailure => "step_failure",
            Termination::StepBudget => "step_budget",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub reparametrizations: u64,
    /// Largest `E_{k+1} − E_k` over accepted steps.
    pub max_step_increase: f64,
    /// Accepted steps with `E_{k+1} > E_k + 1e−10·E_0`.
    pub dissipation_violations: u64,
    /// Largest energy increase caused by a reparametrization.
    pub max_reparam_increase: f64,
    /// Largest `|rate/g² − 1|` over accepted steps with `dt ≤ bound/2`, `g² > 0` and `|ΔE|` above roundoff.
    pub max_rate_mismatch: f64,
    pub min_dt: f64,
    pub max_dt: f64,
    pub final_guard_c: f64,
    /// Largest boundary position / tangent angle errors over all steps (clamped runs).
    pub max_clamp_position_error: f64,
    pub max_clamp_tangent_error: f64,
    /// Largest symmetry residual over all frames.
    pub max_symmetry_residual: f64,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowRun {
    pub config: FlowConfig,
    pub frames: Vec<FlowFrame>,
    pub termination: Termination,
    pub stats: RunStats,
}

impl FlowRun {
    pub fn initial_energy(&self) -> f64 {
        self.frames.first().map_or(f64::NAN, |f| f.energy)
    }

    pub fn last(&self) -> &FlowFrame {
        self.frames.last().expect("run without frames")
    }
}

fn make_frame(
    t: f64,
    step: u64,
    curve: &SampledCurve,
    ev: &GradientEval,
    dt: f64,
    rate: Option<f64>,
    data: Option<&ClampedData>,
) -> Result<FlowFrame, GeometryError> {
    let geo = CurveGeometry::new(curve)?;
    Ok(FlowFrame {
        t,
        step,
        energy: ev.energy,
        hyp_length: geo.hyperbolic_length(),
        euc_length: geo.euclidean_length(),
        grad_norm_sq: ev.grad_norm_sq,
        max_abs: curve.max_abs(),
        symmetry_residuals: SymmetryResiduals::measure(curve),
        dt,
        dt_bound: STABILITY_CONSTANT * ev.min_spacing.powi(4),
        dissipation_rate: rate,
        clamp_errors: data.map(|d| (end_position_error(curve, d), end_tangent_error(curve, d))),
        curve: Some(curve.clone()),
    })
}

fn prepare(config: &FlowConfig, initial: &SampledCurve) -> Result<SampledCurve, FlowError> {
    config.validate()?;
    if initial.model != Model::Disk {
        return Err(FlowError::Config("flow runs in the disk model".into()));
    }
    if initial.topology != config.bc.topology() {
        return Err(FlowError::Config(format!(
            "{} curve given for {:?} boundary conditions",
            initial.topology.as_str(),
            config.bc
        )));
    }
    // start in the parametrization the periodic reparametrization maintains
    let mut curve = if initial.len() == config.n_nodes && config.reparam_every == 0 {
        initial.clone()
    } else {
        resample_constant_speed(initial, config.reparam_speed, initial.domain, config.n_nodes)?
    };
    if let Some(d) = config.clamped_data.as_ref().filter(|_| config.bc == BoundaryCondition::Clamped) {
        if end_position_error(initial, d) > 1e-10 || end_tangent_error(initial, d) > 1e-4 {
            return Err(FlowError::InconsistentClampedData);
        }
        impose_clamped(&mut curve.nodes, d);
    }
    Ok(curve)
}

/// Integrate `∂ₜγ = −∇E(γ)` from `initial` until `t_end`, singular proximity or failure.
pub fn run(config: &FlowConfig, initial: &SampledCurve) -> Result<FlowRun, FlowError> {
    let mut curve = prepare(config, initial)?;
    let data = config.clamped_data.as_ref().filter(|_| config.bc == BoundaryCondition::Clamped);
    let mut ev = GradientEval::default();
    ev.evaluate_kind(&curve, config.gradient, data)?;
    let e0 = ev.energy;
    let mut frames = vec![make_frame(0.0, 0, &curve, &ev, 0.0, None, data)?];
    let mut stats = RunStats { min_dt: f64::INFINITY, ..Default::default() };
    let mut cand = curve.clone();
    let mut cand_ev = GradientEval::default();
    let mut t = 0.0;
    let mut c = config.guard_c0;
    let mut streak = 0u64;
    let mut since_frame = 0usize;
    let mut since_reparam = 0usize;
    let mut last_dt = 0.0;
    let mut last_rate = None;
    let inc_tol = 1e-10 * e0;
    // energy changes below this are summation noise and do not trigger the guard
    let noise = 1e-12 * e0;
    let termination;
    'outer: loop {
        if t >= config.t_end {
            termination = Termination::ReachedTEnd;
            break;
        }
        if config.max_steps.is_some_and(|m| stats.accepted_steps >= m) {
            termination = Termination::StepBudget;
            break;
        }
        let bound = STABILITY_CONSTANT * ev.min_spacing.powi(4);
        let mut rejections = 0;
        loop {
            let mut dt = match config.dt_policy {
                DtPolicy::Fixed => config.dt_initial,
                DtPolicy::AdaptiveEnergyGuard => config.dt_initial.min(c.min(0.5 * STABILITY_CONSTANT) * ev.min_spacing.powi(4)),
            };
            let remaining = config.t_end - t;
            let last = dt >= remaining;
            if last {
                dt = remaining;
            }
            if let Err(e) = advance(&mut cand.nodes, &curve.nodes, &ev.grad, dt, config.bc, data) {
                stats.failure = Some(e.to_string());
                termination = Termination::StepFailure;
                break 'outer;
            }
            let status = check_nodes(&cand.nodes, cand.model).and_then(|_| cand_ev.evaluate_kind(&cand, config.gradient, data).map_err(FlowError::from));
            let outcome = match status {
                Ok(()) if cand_ev.energy.is_finite() => Ok(()),
                Ok(()) => Err(FlowError::NonFinite),
                Err(e) => Err(e),
            };
            let increased = outcome.is_ok() && cand_ev.energy > ev.energy + noise;
            let guard = config.dt_policy == DtPolicy::AdaptiveEnergyGuard;
            if guard && (increased || matches!(outcome, Err(FlowError::NonFinite) | Err(FlowError::Geometry(_)))) {
                stats.rejected_steps += 1;
                rejections += 1;
                c *= 0.5;
                streak = 0;
                if rejections > 60 {
                    stats.failure = Some("energy guard could not find a descending step".into());
                    termination = Termination::StepFailure;
                    break 'outer;
                }
                continue;
            }
            match outcome {
                Err(FlowError::SingularProximity) => {
                    termination = Termination::SingularProximity;
                    break 'outer;
                }
                Err(e) => {
                    stats.failure = Some(e.to_string());
                    termination = Termination::StepFailure;
                    break 'outer;
                }
                Ok(()) => {}
            }
            let inc = cand_ev.energy - ev.energy;
            stats.max_step_increase = if stats.accepted_steps == 0 { inc } else { stats.max_step_increase.max(inc) };
            if inc > inc_tol {
                stats.dissipation_violations += 1;
            }
            let rate = -inc / dt;
            if dt <= 0.5 * bound && ev.grad_norm_sq > 1e-20 && inc.abs() > 1e-12 * e0 {
                stats.max_rate_mismatch = stats.max_rate_mismatch.max((rate / ev.grad_norm_sq - 1.0).abs());
            }
            last_rate = Some(rate);
            last_dt = dt;
            stats.min_dt = stats.min_dt.min(dt);
            stats.max_dt = stats.max_dt.max(dt);
            t = if last { config.t_end } else { t + dt };
            break;
        }
        std::mem::swap(&mut curve, &mut cand);
        std::mem::swap(&mut ev, &mut cand_ev);
        stats.accepted_steps += 1;
        since_frame += 1;
        since_reparam += 1;
        streak += 1;
        if streak % 200 == 0 && c < config.guard_c0 {
            c = (c * 1.1).min(config.guard_c0);
        }
        if let Some(d) = data {
            stats.max_clamp_position_error = stats.max_clamp_position_error.max(end_position_error(&curve, d));
            stats.max_clamp_tangent_error = stats.max_clamp_tangent_error.max(end_tangent_error(&curve, d));
        }
        if config.reparam_every > 0 && since_reparam >= config.reparam_every {
            since_reparam = 0;
            let before = ev.energy;
            let mut re = reparam_constant_speed(&curve, config.reparam_speed, curve.domain)?;
            if let Some(d) = data {
                impose_clamped(&mut re.nodes, d);
            }
            ev.evaluate_kind(&re, config.gradient, data)?;
            stats.reparametrizations += 1;
            stats.max_reparam_increase = stats.max_reparam_increase.max(ev.energy - before);
            curve = re;
            cand = curve.clone();
        }
        let near = curve.max_abs() >= 1.0 - config.singular_eps;
        if since_frame >= config.frame_every || near || t >= config.t_end {
            since_frame = 0;
            frames.push(make_frame(t, stats.accepted_steps, &curve, &ev, last_dt, last_rate, data)?);
        }
        if near {
            termination = Termination::SingularProximity;
            break;
        }
    }
    if frames.last().map_or(true, |f| f.step != stats.accepted_steps) {
        frames.push(make_frame(t, stats.accepted_steps, &curve, &ev, last_dt, last_rate, data)?);
    }
    stats.final_guard_c = c;
    if stats.min_dt == f64::INFINITY {
        stats.min_dt = 0.0;
    }
    stats.max_symmetry_residual = frames
        .iter()
        .filter_map(|f| f.symmetry_residuals.map(|s| s.max()))
        .fold(0.0, f64::max);
    Ok(FlowRun { config: config.clone(), frames, termination, stats })
}

/// Chart velocity field `−∇E` for diagnostics.
pub fn velocity(curve: &SampledCurve) -> Result<Vec<Vec2>, FlowError> {
    let mut ev = GradientEval::default();
    ev.evaluate(curve)?;
    Ok(ev.grad.iter().map(|g| -*g).collect())
}
