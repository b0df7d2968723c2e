//! The two hyperbolic models, isometries, curvature, lengths, energy and reparametrization.

mod curve;
pub mod fd;
mod mobius;
mod point;
mod random;
mod reparam;

pub use curve::{
    closed_polyline, covariant_accel, directed_polyline_distance, elastic_energy, euclidean_length,
    hausdorff_distance, hyperbolic_length, point_segment_distance, signed_curvature,
    signed_curvature_half_plane_formula, winding_number, CurveGeometry, SampledCurve, Topology, MIN_NODES,
};
pub use mobius::MobiusIsometry;
pub use random::{random_closed_disk_curve, random_open_profile};
pub use point::{
    closure_half_point, disk_to_half, disk_to_half_closure, half_to_disk, half_to_disk_closure, metric_factor,
    phi, phi_inv, phi_jacobian, ClosureDiskPoint, ClosureHalfPlanePoint, DiskPoint, HalfPlanePoint, Model,
    Vec2, BOUNDARY_FLOOR,
};
pub use reparam::{
    arclength_fractions, reparam_constant_euclidean_speed, reparam_constant_speed, resample_constant_speed, CurveInterpolant, SpeedWeight,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point ({x}, {y}) is on or too close to the model boundary")]
    Boundary { x: f64, y: f64 },
    #[error("point ({x}, {y}) is not a valid {model:?} point")]
    InvalidPoint { x: f64, y: f64, model: Model },
    #[error("the pole (0,1) has no half-plane image")]
    Pole,
    #[error("curve is not an immersion at node {index}")]
    Immersion { index: usize },
    #[error("operation requires a {expected:?} curve")]
    Topology { expected: Topology },
    #[error("{n} nodes given, at least {min} required")]
    TooFewNodes { n: usize, min: usize },
    #[error("invalid parameter domain [{a}, {b}]")]
    BadDomain { a: f64, b: f64 },
}
