//! Singular parameters in the constant-Euclidean-speed parametrization.

use crate::flow::{FlowFrame, FlowRun};
use crate::geometry::{arclength_fractions, SampledCurve, SpeedWeight, Topology};

use super::AnalysisError;

/// Parameter of each node after reparametrizing to constant Euclidean speed on the same domain.
pub fn euclidean_params(curve: &SampledCurve) -> Vec<f64> {
    let (a, b) = curve.domain;
    arclength_fractions(curve, SpeedWeight::Euclidean).into_iter().map(|f| a + (b - a) * f).collect()
}

/// Distance of two parameters, periodic for closed curves.
pub fn param_distance(curve: &SampledCurve, x: f64, y: f64) -> f64 {
    let d = (x - y).abs();
    match curve.topology {
        Topology::Closed => {
            let p = curve.domain.1 - curve.domain.0;
            let d = d % p;
            d.min(p - d)
        }
        Topology::Open => d,
    }
}

/// Node indices with Euclidean parameter within `delta` of `x`, in curve order.
pub fn window_indices(curve: &SampledCurve, params: &[f64], x: f64, delta: f64) -> Vec<usize> {
    let n = curve.len();
    let centre = (0..n)
        .min_by(|&i, &j| param_distance(curve, params[i], x).total_cmp(&param_distance(curve, params[j], x)))
        .unwrap_or(0);
    let inside = |i: usize| param_distance(curve, params[i], x) <= delta;
    if !inside(centre) {
        return Vec::new();
    }
    let closed = curve.topology == Topology::Closed;
    let mut lo = centre;
    let mut steps = 0;
    loop {
        let prev = match (lo, closed) {
            (0, true) => n - 1,
            (0, false) => break,
            (i, _) => i - 1,
        };
        if !inside(prev) || steps >= n - 1 {
            break;
        }
        lo = prev;
        steps += 1;
    }
    let mut out = vec![lo];
    let mut i = lo;
    while out.len() < n {
        let next = if i + 1 == n {
            if closed {
                0
            } else {
                break;
            }
        } else {
            i + 1
        };
        if !inside(next) {
            break;
        }
        out.push(next);
        i = next;
    }
    out
}

/// Cluster parameters whose nodes come within `eps` of the unit circle.
fn cluster(curve: &SampledCurve, hits: &mut Vec<(f64, f64)>, delta: f64) -> Vec<f64> {
    // (param, |γ|)
    if hits.is_empty() {
        return Vec::new();
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut groups: Vec<Vec<(f64, f64)>> = vec![vec![hits[0]]];
    for w in hits.windows(2) {
        if w[1].0 - w[0].0 > 2.0 * delta {
            groups.push(Vec::new());
        }
        groups.last_mut().unwrap().push(w[1]);
    }
    if curve.topology == Topology::Closed && groups.len() > 1 {
        let first = hits[0].0;
        let last = hits[hits.len() - 1].0;
        if param_distance(curve, first, last) <= 2.0 * delta {
            let head = groups.remove(0);
            groups.last_mut().unwrap().extend(head);
        }
    }
    let mut out: Vec<f64> = groups
        .iter()
        .map(|g| g.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Singular parameters of a list of frames: nodes with `|γ| > 1 − eps`, clustered with
/// minimum separation `2·delta`, each cluster represented by its outermost node.
pub fn detect_singular_params_in(frames: &[&FlowFrame], eps: f64, delta: f64) -> Vec<f64> {
    let Some(last) = frames.last() else { return Vec::new() };
    let mut hits = Vec::new();
    for f in frames {
        let c = f.curve();
        let params = euclidean_params(c);
        for (p, x) in c.nodes.iter().zip(&params) {
            let r = p.norm();
            if r > 1.0 - eps {
                hits.push((*x, r));
            }
        }
    }
    cluster(last.curve(), &mut hits, delta)
}

/// Singular parameters over the late frames (the last quarter of the run's time span).
pub fn detect_singular_params(run: &FlowRun, eps: f64, delta: f64) -> Vec<f64> {
    let Some(last) = run.frames.last() else { return Vec::new() };
    let cut = 0.75 * last.t;
    let late: Vec<&FlowFrame> = run.frames.iter().filter(|f| f.t >= cut && f.curve.is_some()).collect();
    detect_singular_params_in(&late, eps, delta)
}

/// Euclidean length and boundary gap of a parameter window across frames.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct WindowTrend {
    pub x: f64,
    pub times: Vec<f64>,
    pub lengths: Vec<f64>,
    /// `min(1 − |γ|)` over the window.
    pub gaps: Vec<f64>,
}

/// Follow the window `(x − delta, x + delta)` through the given frames.
pub fn window_length_trend(frames: &[&FlowFrame], x: f64, delta: f64) -> Result<WindowTrend, AnalysisError> {
    let mut tr = WindowTrend { x, times: Vec::new(), lengths: Vec::new(), gaps: Vec::new() };
    for f in frames {
        let c = f.curve();
        let params = euclidean_params(c);
        let idx = window_indices(c, &params, x, delta);
        if idx.len() < 2 {
            return Err(AnalysisError::SmallWindow { x });
        }
        let len: f64 = idx.windows(2).map(|w| (c.nodes[w[1]] - c.nodes[w[0]]).norm()).sum();
        let gap = idx.iter().map(|&i| 1.0 - c.nodes[i].norm()).fold(f64::INFINITY, f64::min);
        tr.times.push(f.t);
        tr.lengths.push(len);
        tr.gaps.push(gap);
    }
    Ok(tr)
}
