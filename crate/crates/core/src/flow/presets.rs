//! Initial data for the flow experiments.

use std::f64::consts::FRAC_PI_2;

use crate::geometry::{GeometryError, Model, SampledCurve, Topology, Vec2};

use super::step::ClampedData;

/// `γ(x) = (−a·x(1 − x²)², −b·cos(πx/2))` on `[−1, 1]`.
///
/// Both ends sit at the origin with tangents `∓(0, 1)`; the curve is a drop hanging
/// towards `(0, −b)` and satisfies `γ(−x) = Rγ(x)`.
pub fn vertically_clamped_drop(a: f64, b: f64, n: usize) -> Result<SampledCurve, GeometryError> {
    let nodes = (0..n)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let w = 1.0 - x * x;
            Vec2::new(-a * x * w * w, -b * (FRAC_PI_2 * x).cos())
        })
        .collect::<Vec<_>>();
    let mut c = SampledCurve::new(Model::Disk, Topology::Open, nodes, (-1.0, 1.0))?;
    let last = c.len() - 1;
    c.nodes[0] = Vec2::ZERO;
    c.nodes[last] = Vec2::ZERO;
    Ok(c)
}

/// Boundary data `γ(±1) = 0`, `∂ₛγ(±1) = ±(0, ½)` (unit hyperbolic speed at the origin).
pub fn vertical_clamp_data() -> ClampedData {
    ClampedData {
        start: Vec2::ZERO,
        end: Vec2::ZERO,
        start_tangent: Vec2::new(0.0, -0.5),
        end_tangent: Vec2::new(0.0, 0.5),
    }
}

/// Horizontal diameter segment `[−r, r] × {0}` with a bump `ε·(1 − x²)²·sin(πx)` added vertically.
pub fn perturbed_diameter(r: f64, eps: f64, n: usize) -> Result<SampledCurve, GeometryError> {
    let nodes = (0..n)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let w = 1.0 - x * x;
            Vec2::new(r * x, eps * w * w * (std::f64::consts::PI * x).sin())
        })
        .collect();
    SampledCurve::new(Model::Disk, Topology::Open, nodes, (-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{end_position_error, end_tangent_error, symmetry_monitor, Symmetry};

    #[test]
    fn drop_is_symmetric_and_clamped() {
        let c = vertically_clamped_drop(3.0, 0.6, 101).unwrap();
        assert!(symmetry_monitor(&c, Symmetry::S2Prime).unwrap() < 1e-15);
        let d = vertical_clamp_data();
        assert_eq!(end_position_error(&c, &d), 0.0);
        // the one-sided stencil sees the quartic part, so only an O(h⁴) angle error remains
        assert!(end_tangent_error(&c, &d) < 1e-4);
    }
}
