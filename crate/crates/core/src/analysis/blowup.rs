//! Blow-up of a singular window by half-plane translation and scaling.

use serde::{Deserialize, Serialize};

use crate::flow::FlowRun;
use crate::geometry::{
    hausdorff_distance, phi, phi_inv, reparam_constant_euclidean_speed, Model, SampledCurve, Topology, Vec2,
};

use super::singular::{euclidean_params, window_indices};
use super::AnalysisError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowUpResult {
    /// Rescaled window, reparametrized by constant Euclidean speed on `[−1, 1]`.
    #[serde(skip)]
    pub rescaled_curve: Option<SampledCurve>,
    pub interior_singular_params: Vec<f64>,
    pub n_j: usize,
    /// Hausdorff distance (disk chart) of each segment to the aligned reference.
    pub fit_distances: Vec<f64>,
    /// Half-plane height `u²(ŷ)` used as the scale.
    pub scale: f64,
    /// Largest `|τ − (0, ½)| − ½` over the rescaled window nodes (≤ 0 when contained).
    pub containment_excess: f64,
    /// Distance of the closest rescaled node to the origin.
    pub origin_distance: f64,
    /// Distance of the two window ends from `(0, 1)`.
    pub end_distances: (f64, f64),
    /// Largest `|u¹|` of `Φ(−τ)`, the horizontal offset between the vertical-tangent point and the limit point.
    pub transversal_offset: f64,
}

impl BlowUpResult {
    pub fn curve(&self) -> &SampledCurve {
        self.rescaled_curve.as_ref().expect("blow-up without curve")
    }
}

/// Catenary `(x, cosh x)` in the half-plane, unit hyperbolic speed, mapped to the disk.
pub fn catenary_reference(s_minus: f64, s_plus: f64, samples: usize) -> Vec<Vec2> {
    (0..samples)
        .map(|i| {
            let x = -s_minus + (s_minus + s_plus) * i as f64 / (samples - 1) as f64;
            phi_inv(Vec2::new(x, x.cosh()))
        })
        .collect()
}

fn fit_segment(nodes: &[Vec2]) -> Result<f64, AnalysisError> {
    if nodes.len() < 8 {
        return Err(AnalysisError::Requirement("at least 8 nodes per blow-up segment"));
    }
    // re-centre at this segment's own lowest half-plane point
    let u: Vec<Vec2> = nodes.iter().map(|&p| phi(p)).collect();
    let k = (0..u.len()).min_by(|&a, &b| u[a].y.total_cmp(&u[b].y)).unwrap();
    let (c1, h) = (u[k].x, u[k].y);
    let z: Vec<Vec2> = u.iter().map(|v| Vec2::new((v.x - c1) / h, v.y / h)).collect();
    let disk: Vec<Vec2> = z.iter().map(|&v| phi_inv(v)).collect();
    // hyperbolic arc length on each side of the apex
    let mut sl = 0.0;
    for i in 0..k {
        sl += hyp_chord(z[i], z[i + 1]);
    }
    let mut sr = 0.0;
    for i in k..z.len() - 1 {
        sr += hyp_chord(z[i], z[i + 1]);
    }
    // the catenary is even, so the other orientation is the mirrored reference with swapped reaches
    let d1 = hausdorff_distance(&disk, &catenary_reference(sl, sr, 4001));
    let d2 = hausdorff_distance(&disk, &catenary_reference(sr, sl, 4001));
    Ok(d1.min(d2))
}

/// Half-plane distance between two points.
fn hyp_chord(a: Vec2, b: Vec2) -> f64 {
    let d2 = (a - b).norm_sq();
    (1.0 + d2 / (2.0 * a.y * b.y)).acosh()
}

/// Blow up `curve` around the singular parameter `x` using the window `(x − δ, x + δ)`.
///
/// `eps` is the boundary-proximity threshold used to look for further singular points inside
/// the window and inside the rescaled curve.
pub fn blow_up(curve: &SampledCurve, x: f64, delta: f64, eps: f64) -> Result<BlowUpResult, AnalysisError> {
    if curve.model != Model::Disk {
        return Err(AnalysisError::Requirement("a disk-model curve"));
    }
    let params = euclidean_params(curve);
    let idx = window_indices(curve, &params, x, delta);
    if idx.len() < 8 {
        return Err(AnalysisError::SmallWindow { x });
    }
    let win: Vec<Vec2> = idx.iter().map(|&i| curve.nodes[i]).collect();
    // separate near-boundary clusters inside the window would make the window ambiguous
    let mut clusters = 0;
    let mut inside = false;
    for p in &win {
        let near = p.norm() > 1.0 - eps;
        if near && !inside {
            clusters += 1;
        }
        inside = near;
    }
    if clusters > 1 {
        return Err(AnalysisError::Window { x, clusters });
    }
    let k = (0..win.len()).max_by(|&a, &b| win[a].norm().total_cmp(&win[b].norm())).unwrap();
    let q = win[k];
    let alpha = -std::f64::consts::FRAC_PI_2 - q.y.atan2(q.x);
    let (sa, ca) = alpha.sin_cos();
    let rot = |v: Vec2| Vec2::new(ca * v.x - sa * v.y, sa * v.x + ca * v.y);
    let u: Vec<Vec2> = win.iter().map(|&p| phi(rot(p))).collect();
    let y_hat = (0..u.len()).min_by(|&a, &b| u[a].y.total_cmp(&u[b].y)).unwrap();
    let (c1, scale) = (u[y_hat].x, u[y_hat].y);
    let tau: Vec<Vec2> = u.iter().map(|v| phi_inv(Vec2::new((v.x - c1) / scale, v.y / scale))).collect();
    let centre = Vec2::new(0.0, 0.5);
    let containment_excess = tau.iter().map(|p| (*p - centre).norm() - 0.5).fold(f64::NEG_INFINITY, f64::max);
    let origin_distance = tau.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
    let pole = Vec2::new(0.0, 1.0);
    let end_distances = ((tau[0] - pole).norm(), (tau[tau.len() - 1] - pole).norm());
    let transversal_offset = tau.iter().map(|p| phi(-*p).x.abs()).fold(0.0, f64::max);

    let raw = SampledCurve::new(Model::Disk, Topology::Open, tau.clone(), (-1.0, 1.0))?;
    let rescaled = reparam_constant_euclidean_speed(&raw, (-1.0, 1.0))?;
    // interior points of the rescaled curve that reach the boundary split it into segments
    let rp = euclidean_params(&raw);
    let mut splits: Vec<usize> = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 1..tau.len() - 1 {
        let near = tau[i].norm() > 1.0 - eps;
        match (near, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                let best = (s..i).max_by(|&a, &b| tau[a].norm().total_cmp(&tau[b].norm())).unwrap();
                if best > 4 && best + 5 < tau.len() {
                    splits.push(best);
                }
                run_start = None;
            }
            _ => {}
        }
    }
    let interior_singular_params: Vec<f64> = splits.iter().map(|&i| rp[i]).collect();
    let mut bounds = vec![0];
    bounds.extend(&splits);
    bounds.push(tau.len() - 1);
    let mut fit_distances = Vec::new();
    for w in bounds.windows(2) {
        fit_distances.push(fit_segment(&tau[w[0]..=w[1]])?);
    }
    Ok(BlowUpResult {
        rescaled_curve: Some(rescaled),
        n_j: splits.len() + 1,
        interior_singular_params,
        fit_distances,
        scale,
        containment_excess,
        origin_distance,
        end_distances,
        transversal_offset,
    })
}

/// Blow-up on the last frame of a run.
pub fn blow_up_run(run: &FlowRun, x: f64, delta: f64, eps: f64) -> Result<BlowUpResult, AnalysisError> {
    let last = run.frames.last().ok_or(AnalysisError::EmptyRun)?;
    blow_up(last.curve(), x, delta, eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `ε·(x, cosh x)` in the half-plane: an asymptotically geodesic elastica dipping to height ε.
    fn dipping_catenary(eps: f64, reach: f64, n: usize) -> SampledCurve {
        let nodes = (0..n)
            .map(|i| {
                let x = -reach + 2.0 * reach * i as f64 / (n - 1) as f64;
                phi_inv(Vec2::new(eps * x, eps * x.cosh()))
            })
            .collect();
        SampledCurve::new(Model::Disk, Topology::Open, nodes, (-1.0, 1.0)).unwrap()
    }

    #[test]
    fn exact_elastica_fits_reference() {
        let c = dipping_catenary(1e-4, 6.0, 1001);
        let r = blow_up(&c, 0.0, 0.5, 1e-3).unwrap();
        assert_eq!(r.n_j, 1);
        assert!(r.fit_distances[0] < 1e-4, "{:?}", r.fit_distances);
        assert!(r.containment_excess <= 1e-12);
        assert!(r.origin_distance < 1e-12);
        assert!(r.transversal_offset > 0.1);
    }

    #[test]
    fn catenary_offset_matches_closed_form() {
        // max of x/(x² + cosh²x), the vertical-tangent offset of the λ = 0 profile
        let best = (0..20000).map(|i| i as f64 * 1e-4).map(|x| x / (x * x + x.cosh().powi(2))).fold(0.0, f64::max);
        let tau = catenary_reference(8.0, 8.0, 20001);
        let off = tau.iter().map(|p| phi(-*p).x.abs()).fold(0.0, f64::max);
        assert!((off - best).abs() < 1e-6, "{off} {best}");
    }
}
