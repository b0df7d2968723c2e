//! Energy accounting around singular parameters.

use serde::{Deserialize, Serialize};

use crate::flow::FlowRun;
use crate::geometry::{CurveGeometry, SampledCurve, Topology};

use super::singular::{detect_singular_params, euclidean_params, param_distance};
use super::AnalysisError;

/// Runs whose last frame has `∫|∇E|² ds` above this are reported as inconclusive.
pub const GRAD_NORM_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentClass {
    Geodesic,
    AsymptoticallyGeodesic,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizationReport {
    pub singular_params: Vec<f64>,
    pub count: usize,
    /// Energy in `(x_j − δ, x_j + δ)` for each singular parameter.
    pub per_singularity_energy: Vec<f64>,
    /// Energy of the final curve outside all windows.
    pub residual_energy: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
    /// `residual_energy ≤ E(γ₀) − 8m + tolerance`.
    pub budget_ok: bool,
    /// `E(γ₀) − 8m − residual_energy`.
    pub budget_margin: f64,
    pub tolerance: f64,
    /// `m ≤ ⌊E(γ₀)/8⌋`.
    pub count_bound_ok: bool,
    pub limit_segment_classification: Vec<SegmentClass>,
    /// Largest `|κ|` on each segment between windows.
    pub segment_max_kappa: Vec<f64>,
    /// Last-frame `∫|∇E|² ds`.
    pub grad_norm_sq: f64,
    /// Set when the run is not close to a limit; the other fields are then only indicative.
    pub inconclusive: bool,
    /// Whole curve near the boundary with collapsing Euclidean length.
    pub implosion_suspected: bool,
}

/// `κ²·ds` per node.
pub fn energy_density(curve: &SampledCurve) -> Result<Vec<f64>, AnalysisError> {
    let g = CurveGeometry::new(curve)?;
    Ok(g.kappa.iter().zip(&g.ds).map(|(k, w)| k * k * w).collect())
}

/// Classify one segment from its curvature and hyperbolic arc-length weights.
///
/// `max |κ| < 0.05` gives a geodesic; `|κ|` within 0.05 of `2 sech(s − s_peak)` gives an
/// asymptotically geodesic segment.
pub fn classify_segment(kappa: &[f64], ds: &[f64]) -> (SegmentClass, f64) {
    let kmax = kappa.iter().fold(0.0f64, |a, k| a.max(k.abs()));
    if kmax < 0.05 {
        return (SegmentClass::Geodesic, kmax);
    }
    let peak = (0..kappa.len()).max_by(|&i, &j| kappa[i].abs().total_cmp(&kappa[j].abs())).unwrap_or(0);
    let mut s = vec![0.0; kappa.len()];
    for i in 1..kappa.len() {
        s[i] = s[i - 1] + 0.5 * (ds[i - 1] + ds[i]);
    }
    let err = kappa
        .iter()
        .zip(&s)
        .map(|(k, si)| (k.abs() - 2.0 / (si - s[peak]).cosh()).abs())
        .fold(0.0, f64::max);
    let class = if err < 0.05 { SegmentClass::AsymptoticallyGeodesic } else { SegmentClass::Undetermined };
    (class, kmax)
}

/// Quantization accounting on the last frame of `run`.
pub fn quantization_report(
    run: &FlowRun,
    initial_energy: f64,
    eps: f64,
    delta: f64,
) -> Result<QuantizationReport, AnalysisError> {
    let last = run.frames.last().ok_or(AnalysisError::EmptyRun)?;
    let xs = detect_singular_params(run, eps, delta);
    let first_len = run.frames[0].euc_length;
    let mut rep = report_for_curve(last.curve(), &xs, initial_energy, delta)?;
    rep.grad_norm_sq = last.grad_norm_sq;
    rep.inconclusive = !(last.grad_norm_sq <= GRAD_NORM_THRESHOLD);
    let min_abs = last.curve().nodes.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
    rep.implosion_suspected = min_abs > 0.9 && last.euc_length < 0.5 * first_len;
    Ok(rep)
}

/// Accounting for a single curve with given singular parameters.
pub fn report_for_curve(
    curve: &SampledCurve,
    xs: &[f64],
    initial_energy: f64,
    delta: f64,
) -> Result<QuantizationReport, AnalysisError> {
    let tolerance = 0.5;
    let geo = CurveGeometry::new(curve)?;
    let params = euclidean_params(curve);
    let n = curve.len();
    let dens: Vec<f64> = geo.kappa.iter().zip(&geo.ds).map(|(k, w)| k * k * w).collect();
    let mut owner = vec![None; n];
    let mut per = vec![0.0; xs.len()];
    for i in 0..n {
        for (j, &x) in xs.iter().enumerate() {
            if param_distance(curve, params[i], x) < delta {
                owner[i] = Some(j);
                per[j] += dens[i];
                break;
            }
        }
    }
    let residual: f64 = (0..n).filter(|&i| owner[i].is_none()).map(|i| dens[i]).sum();
    // maximal runs of nodes outside all windows
    let mut segments: Vec<Vec<usize>> = Vec::new();
    let start = match curve.topology {
        Topology::Closed => (0..n).find(|&i| owner[i].is_some()).unwrap_or(0),
        Topology::Open => 0,
    };
    let mut cur: Vec<usize> = Vec::new();
    for k in 0..n {
        let i = (start + k) % n;
        if owner[i].is_none() {
            cur.push(i);
        } else if !cur.is_empty() {
            segments.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        segments.push(cur);
    }
    let mut classes = Vec::new();
    let mut kmaxes = Vec::new();
    for seg in &segments {
        let k: Vec<f64> = seg.iter().map(|&i| geo.kappa[i]).collect();
        let w: Vec<f64> = seg.iter().map(|&i| geo.ds[i]).collect();
        let (c, km) = classify_segment(&k, &w);
        classes.push(c);
        kmaxes.push(km);
    }
    let m = xs.len();
    let margin = initial_energy - 8.0 * m as f64 - residual;
    Ok(QuantizationReport {
        singular_params: xs.to_vec(),
        count: m,
        per_singularity_energy: per,
        residual_energy: residual,
        initial_energy,
        final_energy: geo.energy(),
        budget_ok: margin >= -tolerance,
        budget_margin: margin,
        tolerance,
        count_bound_ok: m as f64 <= (initial_energy / 8.0).floor(),
        limit_segment_classification: classes,
        segment_max_kappa: kmaxes,
        grad_norm_sq: f64::NAN,
        inconclusive: false,
        implosion_suspected: false,
    })
}
