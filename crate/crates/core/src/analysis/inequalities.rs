//! Integral identities and inequalities for half-plane profiles and their surfaces of revolution.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::flow::end_tangents;
use crate::geometry::{fd, CurveGeometry, Model, SampledCurve, Topology};

use super::AnalysisError;

fn require_half_plane(u: &SampledCurve) -> Result<(), AnalysisError> {
    if u.model == Model::HalfPlane {
        Ok(())
    } else {
        Err(AnalysisError::Requirement("a half-plane curve"))
    }
}

/// `(∫(∂ₓu¹)²/(|∂ₓu|u²) dx, E(u) + 4)`.
pub fn est_dxu1_check(u: &SampledCurve) -> Result<(f64, f64), AnalysisError> {
    require_half_plane(u)?;
    let geo = CurveGeometry::new(u)?;
    let h = u.step();
    let n = u.len();
    let mut lhs = 0.0;
    for i in 0..n {
        let d = geo.d1[i];
        lhs += fd::trapezoid_weight(i, n, u.topology) * h * d.x * d.x / (d.norm() * u.nodes[i].y);
    }
    Ok((lhs, geo.energy() + 4.0))
}

/// `(𝓛_hyp, 𝓛_euc, 𝓛_hyp ≥ 2𝓛_euc)` for a disk curve.
pub fn length_ratio_holds(curve: &SampledCurve) -> Result<(f64, f64, bool), AnalysisError> {
    if curve.model != Model::Disk {
        return Err(AnalysisError::Requirement("a disk-model curve"));
    }
    let geo = CurveGeometry::new(curve)?;
    let (lh, le) = (geo.hyperbolic_length(), geo.euclidean_length());
    Ok((lh, le, lh >= 2.0 * le))
}

/// Willmore energy of the surface of revolution from the profile energy:
/// `W = (π/2)(E(u) − 4[∂ₓu²/|∂ₓu|] at the ends)`.
pub fn willmore_energy(u: &SampledCurve) -> Result<f64, AnalysisError> {
    require_half_plane(u)?;
    if u.topology != Topology::Open {
        return Err(AnalysisError::Requirement("an open profile for the boundary term"));
    }
    let geo = CurveGeometry::new(u)?;
    Ok(0.5 * PI * (geo.energy() - 4.0 * boundary_term(u)))
}

fn boundary_term(u: &SampledCurve) -> f64 {
    let (a, b) = end_tangents(u);
    b.y / b.norm() - a.y / a.norm()
}

/// Principal-curvature data per node: `(H, K, u²|∂ₓu|)`.
fn surface_curvatures(u: &SampledCurve) -> Vec<(f64, f64, f64)> {
    let h = u.step();
    let d1 = fd::d1(&u.nodes, h, u.topology);
    let d2 = fd::d2(&u.nodes, h, u.topology);
    (0..u.len())
        .map(|i| {
            let (a, b, y) = (d1[i], d2[i], u.nodes[i].y);
            let e = a.norm();
            let k_profile = a.cross(b) / (e * e * e);
            let k_parallel = -a.x / (e * y);
            let gauss = (b.x * a.y - b.y * a.x) * a.x / (y * e.powi(4));
            (0.5 * (k_profile + k_parallel), gauss, y * e)
        })
        .collect()
}

/// `∫H² dμ` over the surface `(u¹, u² cos φ, u² sin φ)` by direct quadrature.
pub fn willmore_direct(u: &SampledCurve) -> Result<f64, AnalysisError> {
    require_half_plane(u)?;
    let n = u.len();
    let h = u.step();
    let s: f64 = surface_curvatures(u)
        .iter()
        .enumerate()
        .map(|(i, (hm, _, area))| fd::trapezoid_weight(i, n, u.topology) * h * hm * hm * area)
        .sum();
    Ok(2.0 * PI * s)
}

/// `∫K dμ = 2π∫K u²|∂ₓu| dx`.
pub fn gauss_bonnet_integral(u: &SampledCurve) -> Result<f64, AnalysisError> {
    require_half_plane(u)?;
    let n = u.len();
    let h = u.step();
    let s: f64 = surface_curvatures(u)
        .iter()
        .enumerate()
        .map(|(i, (_, k, area))| fd::trapezoid_weight(i, n, u.topology) * h * k * area)
        .sum();
    Ok(2.0 * PI * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WillmoreCheck {
    pub from_energy: f64,
    pub direct: f64,
    pub rel_error: f64,
    pub gauss_integral: f64,
}

impl WillmoreCheck {
    pub fn new(u: &SampledCurve) -> Result<Self, AnalysisError> {
        let from_energy = willmore_energy(u)?;
        let direct = willmore_direct(u)?;
        Ok(WillmoreCheck {
            from_energy,
            direct,
            rel_error: (from_energy - direct).abs() / direct.abs().max(1e-300),
            gauss_integral: gauss_bonnet_integral(u)?,
        })
    }
}
