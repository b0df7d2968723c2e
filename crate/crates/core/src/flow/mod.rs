//! Elastic flow `∂ₜγ = −∇E(γ)` for closed and clamped curves in the disk.

mod gradient;
mod monitors;
pub mod presets;
mod run;
mod step;

pub use gradient::{gradient, pairing, GradientEval, GradientKind};
pub use monitors::{
    euclidean_length_ratio, fenchel_check, origin_pin_residual, symmetry_monitor, Symmetry, SymmetryResiduals,
};
pub use run::{run, velocity, DtPolicy, FlowConfig, FlowFrame, FlowRun, RunStats, Termination, STABILITY_CONSTANT};
pub use step::{
    end_position_error, end_tangent_error, end_tangents, impose_clamped, step, BoundaryCondition, ClampedData,
};

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid flow configuration: {0}")]
    Config(String),
    #[error("clamped boundary conditions need endpoint data")]
    MissingClampedData,
    #[error("initial curve does not match the clamped boundary data")]
    InconsistentClampedData,
    #[error("a node reached the boundary of the disk")]
    SingularProximity,
    #[error("non-finite value produced by the step")]
    NonFinite,
    #[error("node grid is not symmetric under {0:?}")]
    AsymmetricGrid(Symmetry),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
