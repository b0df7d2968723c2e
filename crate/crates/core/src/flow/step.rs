//! One explicit Euler step of the elastic flow.

use crate::geometry::{fd, metric_factor, GeometryError, Model, SampledCurve, Topology, Vec2};

use super::gradient::{GradientEval, GradientKind};
use super::FlowError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Closed,
    Clamped,
}

impl BoundaryCondition {
    pub fn topology(self) -> Topology {
        match self {
            BoundaryCondition::Closed => Topology::Closed,
            BoundaryCondition::Clamped => Topology::Open,
        }
    }
}

/// Endpoint positions and unit hyperbolic tangents (chart components) of a clamped curve.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ClampedData {
    pub start: Vec2,
    pub end: Vec2,
    pub start_tangent: Vec2,
    pub end_tangent: Vec2,
}

impl ClampedData {
    /// Read the data off an open curve, using the one-sided derivative at each end.
    pub fn from_curve(curve: &SampledCurve) -> Result<Self, GeometryError> {
        if curve.topology != Topology::Open {
            return Err(GeometryError::Topology { expected: Topology::Open });
        }
        let (a, b) = end_tangents(curve);
        let n = curve.len();
        let unit = |p: Vec2, t: Vec2| -> Result<Vec2, GeometryError> {
            let f = metric_factor(p, curve.model)?;
            Ok(t * (1.0 / (f * t.norm())))
        };
        Ok(ClampedData {
            start: curve.nodes[0],
            end: curve.nodes[n - 1],
            start_tangent: unit(curve.nodes[0], a)?,
            end_tangent: unit(curve.nodes[n - 1], b)?,
        })
    }
}

/// One-sided derivative vectors `∂ₓγ` at the two ends of an open curve (unscaled by `h`).
pub fn end_tangents(curve: &SampledCurve) -> (Vec2, Vec2) {
    let p = &curve.nodes;
    let n = p.len();
    let a = p[0] * -25.0 + p[1] * 48.0 - p[2] * 36.0 + p[3] * 16.0 - p[4] * 3.0;
    let b = p[n - 1] * 25.0 - p[n - 2] * 48.0 + p[n - 3] * 36.0 - p[n - 4] * 16.0 + p[n - 5] * 3.0;
    (a, b)
}

/// Largest angle (radians) between the measured end tangents and the clamped data.
pub fn end_tangent_error(curve: &SampledCurve, data: &ClampedData) -> f64 {
    let (a, b) = end_tangents(curve);
    let ang = |v: Vec2, t: Vec2| v.cross(t).atan2(v.dot(t)).abs();
    ang(a, data.start_tangent).max(ang(b, data.end_tangent))
}

/// Largest distance between the end nodes and the clamped positions.
pub fn end_position_error(curve: &SampledCurve, data: &ClampedData) -> f64 {
    let n = curve.len();
    (curve.nodes[0] - data.start).norm().max((curve.nodes[n - 1] - data.end).norm())
}

/// Pin the end nodes and move the neighbouring nodes along the normal of the prescribed
/// tangent so that the one-sided derivative at each end is parallel to it.
pub fn impose_clamped(nodes: &mut [Vec2], data: &ClampedData) {
    let n = nodes.len();
    nodes[0] = data.start;
    nodes[n - 1] = data.end;
    let fix = |t: Vec2, p0: Vec2, p2: Vec2, p3: Vec2, p4: Vec2, p1: Vec2| -> Vec2 {
        let nrm = t.perp() * (1.0 / t.norm());
        let target = nrm.dot(p0 * 25.0 + p2 * 36.0 - p3 * 16.0 + p4 * 3.0) / 48.0;
        p1 + nrm * (target - nrm.dot(p1))
    };
    nodes[1] = fix(data.start_tangent, nodes[0], nodes[2], nodes[3], nodes[4], nodes[1]);
    nodes[n - 2] = fix(data.end_tangent, nodes[n - 1], nodes[n - 3], nodes[n - 4], nodes[n - 5], nodes[n - 2]);
}

/// `γ − dt·G(γ)` for the chosen descent field `G`, with the boundary data re-imposed for clamped curves.
pub fn step(
    curve: &SampledCurve,
    dt: f64,
    bc: BoundaryCondition,
    data: Option<&ClampedData>,
    kind: GradientKind,
) -> Result<SampledCurve, FlowError> {
    let mut ev = GradientEval::default();
    ev.evaluate_kind(curve, kind, data)?;
    let mut out = curve.clone();
    advance(&mut out.nodes, &curve.nodes, &ev.grad, dt, bc, data)?;
    check_nodes(&out.nodes, curve.model)?;
    Ok(out)
}

/// Core update on raw node slices.
pub(crate) fn advance(
    out: &mut [Vec2],
    nodes: &[Vec2],
    grad: &[Vec2],
    dt: f64,
    bc: BoundaryCondition,
    data: Option<&ClampedData>,
) -> Result<(), FlowError> {
    for ((o, p), g) in out.iter_mut().zip(nodes).zip(grad) {
        *o = *p - *g * dt;
    }
    if bc == BoundaryCondition::Clamped {
        let d = data.ok_or(FlowError::MissingClampedData)?;
        impose_clamped(out, d);
    }
    Ok(())
}

pub(crate) fn check_nodes(nodes: &[Vec2], model: Model) -> Result<(), FlowError> {
    for p in nodes {
        if !p.is_finite() {
            return Err(FlowError::NonFinite);
        }
        if !model.contains(*p) || (model == Model::Disk && 1.0 - p.norm_sq() < crate::geometry::BOUNDARY_FLOOR) {
            return Err(FlowError::SingularProximity);
        }
    }
    Ok(())
}

/// Hyperbolic tangent of the one-sided stencil at node 0, for tests.
#[allow(dead_code)]
pub(crate) fn start_derivative(curve: &SampledCurve) -> Vec2 {
    fd::d1(&curve.nodes, curve.step(), Topology::Open)[0]
}
