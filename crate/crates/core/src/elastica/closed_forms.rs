//! Explicit asymptotically geodesic elastica and related constants.

use serde::Serialize;

use crate::geometry::{ClosureDiskPoint, HalfPlanePoint, Vec2};

/// `sech x`, stable for large `|x|`.
#[inline]
pub fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// Raw coordinates of `u(x) = (x, cosh x)/(x² + cosh²x)`, unit hyperbolic speed.
pub fn asymptotically_geodesic_halfplane_raw(x: f64) -> Vec2 {
    let c = sech(x);
    let den = x * x * c * c + 1.0;
    Vec2::new(x * c * c / den, c / den)
}

/// Raw coordinates of `γ(x) = (2x, 1 − x² − cosh²x)/(1 + x² + cosh x(2 + cosh x))`.
pub fn asymptotically_geodesic_disk_raw(x: f64) -> Vec2 {
    let c = sech(x);
    let c2 = c * c;
    let den = c2 + x * x * c2 + 2.0 * c + 1.0;
    Vec2::new(2.0 * x * c2 / den, (c2 - x * x * c2 - 1.0) / den)
}

pub fn asymptotically_geodesic_halfplane(x: f64) -> HalfPlanePoint {
    let u = asymptotically_geodesic_halfplane_raw(x);
    HalfPlanePoint::new(u.x, u.y.max(f64::MIN_POSITIVE)).expect("finite closed form")
}

pub fn asymptotically_geodesic_disk(x: f64) -> ClosureDiskPoint {
    let p = asymptotically_geodesic_disk_raw(x);
    let r = p.norm();
    let p = if r > 1.0 { p * (1.0 / r) } else { p };
    ClosureDiskPoint::new(p.x, p.y).expect("finite closed form")
}

/// Derivative of the half-plane closed form.
pub fn asymptotically_geodesic_halfplane_derivative(x: f64) -> Vec2 {
    let (ch, sh) = (x.cosh(), x.sinh());
    let d = x * x + ch * ch;
    let dd = 2.0 * x + 2.0 * ch * sh;
    Vec2::new((d - x * dd) / (d * d), (sh * d - ch * dd) / (d * d))
}

/// `∫ κ₀² sech²(rs) ds = 2κ₀²/r = 4√(2λ+4)`.
pub fn energy_asymptotically_geodesic(lambda: f64) -> f64 {
    4.0 * (2.0 * lambda + 4.0).max(0.0).sqrt()
}

/// Intersection data of `u` with the geodesic `v(x) = h(cos x + 1, sin x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transversality {
    pub x_u: f64,
    pub x_v: f64,
    /// `det(u'(x_u) | v'(x_v))` from the closed form.
    pub det_value: f64,
    /// Same determinant evaluated from the derivatives directly.
    pub det_direct: f64,
    /// `|u(x_u) − v(x_v)|`.
    pub gap: f64,
}

pub fn geodesic_circle(h: f64, x: f64) -> Vec2 {
    Vec2::new(h * (x.cos() + 1.0), h * x.sin())
}

pub fn transversality_constants(h: f64) -> Transversality {
    let x_u = 1.0 / (2.0 * h);
    let x_v = 2.0 * (2.0 * h * x_u.cosh()).atan();
    let det_value = -4.0 * h.powi(3) / (2.0 * h * h + 2.0 * h * h * (1.0 / h).cosh() + 1.0);
    let du = asymptotically_geodesic_halfplane_derivative(x_u);
    let dv = Vec2::new(-h * x_v.sin(), h * x_v.cos());
    let gap = (asymptotically_geodesic_halfplane_raw(x_u) - geodesic_circle(h, x_v)).norm();
    Transversality { x_u, x_v, det_value, det_direct: du.cross(dv), gap }
}
