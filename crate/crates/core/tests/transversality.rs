mod common;

use hypelastic::elastica::{asymptotically_geodesic_halfplane_raw, geodesic_circle, transversality_constants};
use hypelastic::geometry::Vec2;

/// Crossing of the elastica with the circle `|z − (h, 0)| = h`, located by bisection.
fn crossing(h: f64) -> (f64, f64) {
    let g = |x: f64| {
        let u = common::elastica(x);
        (u - Vec2::new(h, 0.0)).norm_sq() - h * h
    };
    // the circle passes through the origin, where the tail ends, so bracket the first sign change only
    let mut b = 0.01;
    while g(b).signum() == g(1e-6).signum() {
        b += 0.01;
    }
    let x_u = common::bisect(g, b - 0.01, b);
    let u = common::elastica(x_u);
    let x_v = (u.y / h).atan2(u.x / h - 1.0);
    (x_u, x_v)
}

#[test]
fn constants_match_the_bisection_oracle() {
    for &h in &[0.25, 0.5, 1.0, 2.0, 4.0] {
        let t = transversality_constants(h);
        let (x_u, x_v) = crossing(h);
        assert!((t.x_u - x_u).abs() < 1e-10, "h = {h}: x_u {} vs {x_u}", t.x_u);
        assert!((t.x_v - x_v).abs() < 1e-10, "h = {h}: x_v {} vs {x_v}", t.x_v);
        let du = common::elastica_derivative(x_u);
        let dv = Vec2::new(-h * x_v.sin(), h * x_v.cos());
        let det = du.cross(dv);
        assert!((t.det_value - det).abs() < 1e-10, "h = {h}: det {} vs {det}", t.det_value);
        assert!((t.det_direct - det).abs() < 1e-10);
        assert!(t.gap < 1e-12);
        assert!((asymptotically_geodesic_halfplane_raw(x_u) - geodesic_circle(h, x_v)).norm() < 1e-10);
    }
}
