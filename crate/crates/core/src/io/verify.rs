//! Invariant checks over stored run archives, plus solver checks that need no archive.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{blow_up_run, inequality_suite, quantization_report, window_length_trend};
use crate::flow::{
    euclidean_length_ratio, gradient, run, symmetry_monitor, BoundaryCondition, DtPolicy, FlowConfig, FlowFrame,
    FlowRun, GradientKind, Symmetry, STABILITY_CONSTANT,
};
use crate::geometry::{elastic_energy, Model, SampledCurve, Topology, Vec2};

use super::archive::{read_archive, QuantizationDigest};
use super::IoError;

pub const DEFAULT_EPS: f64 = 1e-3;
pub const DEFAULT_DELTA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub module: String,
    pub status: Status,
    pub value: Option<f64>,
    pub limit: Option<f64>,
    pub detail: String,
}

impl Check {
    fn new(module: &str, name: &str, pass: bool, value: Option<f64>, limit: Option<f64>, detail: String) -> Self {
        Check {
            name: name.into(),
            module: module.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            value: value.filter(|v| v.is_finite()),
            limit,
            detail,
        }
    }

    fn not_applicable(module: &str, name: &str, detail: &str) -> Self {
        Check {
            name: name.into(),
            module: module.into(),
            status: Status::NotApplicable,
            value: None,
            limit: None,
            detail: detail.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveReport {
    pub path: PathBuf,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl ArchiveReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub archives: Vec<ArchiveReport>,
    pub solver: Vec<Check>,
    pub pass: bool,
}

/// Verify every archive; solver checks run once when at least one archive is given.
pub fn verify_paths(paths: &[PathBuf], seed: u64) -> Result<VerifyReport, IoError> {
    if paths.is_empty() {
        return Ok(VerifyReport { archives: Vec::new(), solver: Vec::new(), pass: true });
    }
    let results: Vec<Result<ArchiveReport, IoError>> = std::thread::scope(|s| {
        let handles: Vec<_> = paths.iter().map(|p| s.spawn(move || verify_archive(p))).collect();
        handles.into_iter().map(|h| h.join().expect("verify worker panicked")).collect()
    });
    let archives = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let solver = solver_checks(seed);
    let pass = archives.iter().all(|a| a.pass) && solver.iter().all(|c| !c.failed());
    Ok(VerifyReport { archives, solver, pass })
}

pub fn verify_archive(dir: &Path) -> Result<ArchiveReport, IoError> {
    let archive = read_archive(dir)?;
    let (eps, delta) = archive.summary.quantization.as_ref().map_or((DEFAULT_EPS, DEFAULT_DELTA), |q| (q.eps, q.delta));
    let mut checks = flow_checks(&archive.run);
    checks.extend(analysis_checks(&archive.run, archive.summary.quantization.as_ref(), eps, delta));
    let pass = checks.iter().all(|c| !c.failed());
    Ok(ArchiveReport { path: dir.to_path_buf(), checks, pass })
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300) || a.to_bits() == b.to_bits()
}

/// Checks of the flow invariants that a stored run can witness.
pub fn flow_checks(run: &FlowRun) -> Vec<Check> {
    const M: &str = "flow";
    let frames = &run.frames;
    let mut out = Vec::new();
    if frames.is_empty() {
        out.push(Check::new(M, "frames_present", false, None, None, "archive holds no frames".into()));
        return out;
    }
    let e0 = frames[0].energy;

    // stored energies must be reproduced by the stored curves before they can witness dissipation
    let mut worst_record: f64 = 0.0;
    let mut bad_record = None;
    for (k, f) in frames.iter().enumerate() {
        let e = f.curve.as_ref().and_then(|c| elastic_energy(c).ok()).unwrap_or(f64::NAN);
        let d = (e - f.energy).abs() / e.abs().max(1e-300);
        if !(d <= 1e-9) && bad_record.is_none() {
            bad_record = Some(k);
        }
        worst_record = worst_record.max(if d.is_nan() { f64::INFINITY } else { d });
    }
    let mut worst_inc = f64::NEG_INFINITY;
    let mut bad_step = None;
    for (k, w) in frames.windows(2).enumerate() {
        let steps = w[1].step.saturating_sub(w[0].step).max(1) as f64;
        let inc = w[1].energy - w[0].energy - 1e-10 * e0 * steps;
        if inc > 0.0 && bad_step.is_none() {
            bad_step = Some(k + 1);
        }
        worst_inc = worst_inc.max(inc);
    }
    let violations = run.stats.dissipation_violations;
    let detail = match (bad_record, bad_step) {
        (Some(k), _) => format!("frame {k}: stored energy differs from the energy of its curve"),
        (None, Some(k)) => format!("frame {k}: energy rose above the per-step tolerance"),
        _ if violations > 0 => format!("{violations} accepted steps increased the energy"),
        _ => format!("record error {worst_record:.1e}; {} accepted steps", run.stats.accepted_steps),
    };
    out.push(Check::new(
        M,
        "energy_dissipation",
        bad_record.is_none() && bad_step.is_none() && violations == 0,
        Some(worst_inc.max(run.stats.max_step_increase)),
        Some(1e-10 * e0),
        detail,
    ));

    let increasing = frames.windows(2).all(|w| w[1].t > w[0].t);
    out.push(Check::new(M, "frame_times_increasing", increasing, None, None, format!("{} frames", frames.len())));

    let first = frames[0].curve();
    let symmetric = |s: Symmetry| symmetry_monitor(first, s).is_ok_and(|r| r < 1e-12);
    let relevant: Vec<Symmetry> =
        [Symmetry::S1, Symmetry::S2, Symmetry::S2Prime].into_iter().filter(|&s| symmetric(s)).collect();
    if relevant.is_empty() {
        out.push(Check::not_applicable(M, "symmetry_preservation", "initial curve has no monitored symmetry"));
    } else {
        let worst = frames
            .iter()
            .flat_map(|f| relevant.iter().map(move |&s| symmetry_monitor(f.curve(), s).unwrap_or(f64::INFINITY)))
            .fold(0.0, f64::max);
        out.push(Check::new(M, "symmetry_preservation", worst < 1e-8, Some(worst), Some(1e-8), format!("{relevant:?}")));
    }
    if relevant.contains(&Symmetry::S1) {
        let worst = frames
            .iter()
            .map(|f| f.symmetry_residuals.and_then(|s| s.origin).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        out.push(Check::new(M, "origin_pinning", worst <= 1e-10, Some(worst), Some(1e-10), String::new()));
    } else {
        out.push(Check::not_applicable(M, "origin_pinning", "initial curve is not odd"));
    }

    let times: Vec<f64> = frames.iter().map(|f| f.t).collect();
    let lengths: Vec<f64> = frames.iter().map(|f| f.euc_length).collect();
    let span = run.last().t;
    let ratio = euclidean_length_ratio(&times, &lengths, span);
    out.push(Check::new(
        M,
        "euclidean_length_bounded",
        ratio <= 1.2,
        Some(ratio),
        Some(1.2),
        "largest length over the running median after a quarter of the run".into(),
    ));

    let mismatch = run.stats.max_rate_mismatch;
    out.push(Check::new(
        M,
        "gradient_energy_consistency",
        mismatch < 0.05,
        Some(mismatch),
        Some(0.05),
        "largest |(−ΔE/dt)/g² − 1| over steps with dt below half the stability bound".into(),
    ));

    if first.topology == Topology::Closed {
        let bound = 4.0 * PI * PI / e0;
        let worst = frames.iter().map(|f| f.hyp_length).fold(f64::INFINITY, f64::min);
        out.push(Check::new(M, "fenchel_length_bound", worst >= bound - 1e-9, Some(worst), Some(bound), String::new()));
    } else {
        out.push(Check::not_applicable(M, "fenchel_length_bound", "open curve"));
    }

    if run.config.bc == BoundaryCondition::Clamped {
        let pos = run.stats.max_clamp_position_error;
        let tan = run.stats.max_clamp_tangent_error;
        let framewise = frames.iter().filter_map(|f| f.clamp_errors).fold((0.0f64, 0.0f64), |a, c| (a.0.max(c.0), a.1.max(c.1)));
        let (pos, tan) = (pos.max(framewise.0), tan.max(framewise.1));
        out.push(Check::new(
            M,
            "clamped_boundary_preserved",
            pos <= 1e-12 && tan <= 1e-8,
            Some(pos.max(tan)),
            Some(1e-8),
            format!("position {pos:.1e}, tangent {tan:.1e}"),
        ));
    } else {
        out.push(Check::not_applicable(M, "clamped_boundary_preserved", "closed run"));
    }
    out
}

fn late_frames(run: &FlowRun) -> Vec<&FlowFrame> {
    let cut = 0.75 * run.last().t;
    run.frames.iter().filter(|f| f.t >= cut).collect()
}

/// Checks of the analysis invariants, comparing stored claims against a recomputation.
pub fn analysis_checks(run: &FlowRun, digest: Option<&QuantizationDigest>, eps: f64, delta: f64) -> Vec<Check> {
    const M: &str = "analysis";
    let mut out = Vec::new();
    if run.frames.is_empty() {
        return out;
    }
    let e0 = run.initial_energy();
    let report = match quantization_report(run, e0, eps, delta) {
        Ok(r) => r,
        Err(e) => {
            out.push(Check::new(M, "quantization_budget", false, None, None, format!("recomputation failed: {e}")));
            return out;
        }
    };
    let m = report.count;
    let budget = e0 - 8.0 * m as f64;
    let mut mismatch = Vec::new();
    if let Some(d) = digest {
        if d.count != m {
            mismatch.push(format!("stored m = {} but recomputed {m}", d.count));
        }
        if d.singular_params.len() != report.singular_params.len()
            || d.singular_params.iter().zip(&report.singular_params).any(|(a, b)| !rel_close(*a, *b, 1e-9))
        {
            mismatch.push("singular parameters differ".into());
        }
        if !rel_close(d.budget, budget, 1e-9) {
            mismatch.push(format!("stored budget {} but E(γ₀) − 8m = {budget}", d.budget));
        }
        if !rel_close(d.residual_energy, report.residual_energy, 1e-9) {
            mismatch.push(format!("stored residual {} but recomputed {}", d.residual_energy, report.residual_energy));
        }
        if d.budget_ok != report.budget_ok {
            mismatch.push("stored budget verdict differs".into());
        }
    }
    let lhs = report.residual_energy + 8.0 * m as f64;
    let detail = if mismatch.is_empty() {
        format!("m = {m}, residual {:.6}, budget {budget:.6}{}", report.residual_energy, if report.inconclusive { ", inconclusive" } else { "" })
    } else {
        mismatch.join("; ")
    };
    out.push(Check::new(
        M,
        "quantization_budget",
        mismatch.is_empty() && lhs <= e0 + report.tolerance,
        Some(lhs),
        Some(e0 + report.tolerance),
        detail,
    ));
    let cap = (e0 / 8.0).floor();
    out.push(Check::new(M, "count_bound", (m as f64) <= cap, Some(m as f64), Some(cap), String::new()));

    if m == 0 {
        for name in ["blowup_containment", "transversality", "nonvanishing_length"] {
            out.push(Check::not_applicable(M, name, "no singular parameters detected"));
        }
        return out;
    }
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_offset = f64::INFINITY;
    let mut errors = Vec::new();
    for &x in &report.singular_params {
        match blow_up_run(run, x, delta, eps) {
            Ok(b) => {
                worst_excess = worst_excess.max(b.containment_excess);
                worst_offset = worst_offset.min(b.transversal_offset);
            }
            Err(e) => errors.push(format!("x = {x}: {e}")),
        }
    }
    let blown = errors.is_empty();
    out.push(Check::new(M, "blowup_containment", blown && worst_excess <= 1e-9, Some(worst_excess), Some(1e-9), errors.join("; ")));
    out.push(Check::new(M, "transversality", blown && worst_offset > 0.1, Some(worst_offset), Some(0.1), errors.join("; ")));

    let late = late_frames(run);
    let mut shrink = true;
    let mut detail = Vec::new();
    for &x in &report.singular_params {
        match window_length_trend(&late, x, delta) {
            Ok(tr) => {
                let (a, b) = (tr.lengths[0], *tr.lengths.last().unwrap());
                if b > a {
                    shrink = false;
                }
                detail.push(format!("x = {x:.3}: window length {a:.4} → {b:.4}"));
            }
            Err(e) => {
                shrink = false;
                detail.push(format!("x = {x:.3}: {e}"));
            }
        }
    }
    out.push(Check::new(M, "nonvanishing_length", shrink, None, None, detail.join("; ")));
    out
}

/// Solver properties on fixed synthetic problems and the inequality suite on seeded random curves.
pub fn solver_checks(seed: u64) -> Vec<Check> {
    vec![stationary_points(), order_check(), inequalities(seed)]
}

fn inequalities(seed: u64) -> Check {
    match inequality_suite(seed, 100, 10) {
        Ok(s) => Check::new(
            "analysis",
            "inequality_suite",
            s.violations() == 0,
            Some(s.violations() as f64),
            Some(0.0),
            format!(
                "seed {seed}: est-dxu1 margin {:.3e}, length ratio margin {:.3e}, Fenchel margin {:.3e}, Willmore error {:.2e}",
                s.est_dxu1.worst, s.length_ratio.worst, s.fenchel.worst, s.willmore.worst
            ),
        ),
        Err(e) => Check::new("analysis", "inequality_suite", false, None, None, e.to_string()),
    }
}

fn disk_circle(r: f64, n: usize) -> SampledCurve {
    let nodes = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            Vec2::new(r * a.cos(), r * a.sin())
        })
        .collect();
    SampledCurve::new(Model::Disk, Topology::Closed, nodes, (0.0, 1.0)).unwrap()
}

fn stationary_points() -> Check {
    let sup = |c: &SampledCurve| gradient(c).map_or(f64::INFINITY, |g| g.iter().map(|v| v.norm()).fold(0.0, f64::max));
    let nodes = (0..64).map(|i| Vec2::new(-0.8 + 1.6 * i as f64 / 63.0, 0.0)).collect();
    let diameter = SampledCurve::new(Model::Disk, Topology::Open, nodes, (-1.0, 1.0)).unwrap();
    let g_geo = sup(&diameter);
    // the hyperbolic circle with κ² = 2 has Euclidean radius √2 − 1
    let g_circle = sup(&disk_circle(2f64.sqrt() - 1.0, 384));
    Check::new(
        "flow",
        "stationary_points",
        g_geo < 1e-8 && g_circle < 5e-8,
        Some(g_geo.max(g_circle)),
        Some(1e-8),
        format!("geodesic {g_geo:.1e}, κ² = 2 circle {g_circle:.1e} (rounding floor 5e−8 at N = 384)"),
    )
}

fn ellipse(n: usize) -> SampledCurve {
    let nodes = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            Vec2::new(0.5 * a.cos(), 0.35 * a.sin() + 0.05 * (2.0 * a).sin())
        })
        .collect();
    SampledCurve::new(Model::Disk, Topology::Closed, nodes, (0.0, 1.0)).unwrap()
}

fn flow_fixed(n: usize, dt: f64, t_end: f64) -> Option<Vec<Vec2>> {
    let config = FlowConfig {
        n_nodes: n,
        dt_initial: dt,
        dt_policy: DtPolicy::Fixed,
        t_end,
        reparam_every: 0,
        frame_every: usize::MAX,
        gradient: GradientKind::DiscreteEnergy,
        ..Default::default()
    };
    let r = run(&config, &ellipse(n)).ok()?;
    Some(r.last().curve().nodes.clone())
}

fn sup_diff(a: &[Vec2], b: &[Vec2], stride: usize) -> f64 {
    a.iter().enumerate().map(|(i, p)| (*p - b[i * stride]).norm()).fold(0.0, f64::max)
}

/// Observed convergence factors under halving dt and doubling N.
pub fn order_factors() -> Option<(f64, f64)> {
    let t_end = 2e-4;
    let n = 32;
    // κ-weighted spacing of the test ellipse is about 2.5/n in hyperbolic length
    let dt0 = 0.25 * STABILITY_CONSTANT * (2.0 / n as f64).powi(4);
    let steps = (t_end / dt0).ceil();
    let dt0 = t_end / steps;
    let a = flow_fixed(n, dt0, t_end)?;
    let b = flow_fixed(n, dt0 / 2.0, t_end)?;
    let c = flow_fixed(n, dt0 / 4.0, t_end)?;
    let time = sup_diff(&a, &b, 1) / sup_diff(&b, &c, 1);
    let dt_fine = 0.25 * STABILITY_CONSTANT * (2.0 / (4 * n) as f64).powi(4);
    let dt_fine = t_end / (t_end / dt_fine).ceil();
    let s1 = flow_fixed(n, dt_fine, t_end)?;
    let s2 = flow_fixed(2 * n, dt_fine, t_end)?;
    let s4 = flow_fixed(4 * n, dt_fine, t_end)?;
    let space = sup_diff(&s1, &s2, 2) / sup_diff(&s2[..], &s4, 2);
    Some((time, space))
}

fn order_check() -> Check {
    match order_factors() {
        Some((time, space)) => Check::new(
            "flow",
            "order_check",
            (1.6..=2.5).contains(&time) && space >= 3.2,
            Some(time),
            Some(2.0),
            format!("halving dt: factor {time:.3} (first order); doubling N: factor {space:.2} (second order or better)"),
        ),
        None => Check::new("flow", "order_check", false, None, None, "test flow failed".into()),
    }
}
