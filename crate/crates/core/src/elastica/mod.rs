//! Stationary curves: elastica classification, profiles, frame integration,
//! explicit asymptotically geodesic curves and the symmetric λ-figure-eights.

mod classify;
mod closed_forms;
mod figure_eight;
mod frame;
pub mod jacobi;

pub use classify::{classify, curvature_profile, first_integral_at_peak, wave_like, ElasticaParams, Family};
pub use closed_forms::{
    asymptotically_geodesic_disk, asymptotically_geodesic_disk_raw, asymptotically_geodesic_halfplane,
    asymptotically_geodesic_halfplane_derivative, asymptotically_geodesic_halfplane_raw,
    energy_asymptotically_geodesic, geodesic_circle, sech, transversality_constants, Transversality,
};
pub use figure_eight::{
    construct_lambda_figure_eight, figure_eight_energy, measured_energy, shooting_residual, FigureEight, LAMBDA_MAX,
};
pub use frame::{integrate_endpoint, integrate_frame, FramePose, FrameTrack};
pub use jacobi::{complete_integrals, jacobi_cn, jacobi_dn, jacobi_sn, jacobi_sncndn, EllipticModulus};

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElasticaError {
    #[error("λ = {0} must exceed −2")]
    InvalidLambda(f64),
    #[error("κ₀² = {0} must be a nonnegative number")]
    InvalidCurvature(f64),
    #[error("modulus {0} is outside the admissible range")]
    InvalidModulus(f64),
    #[error("no λ-constrained elastica has κ₀² = {kappa0_sq} when λ = {lambda}")]
    NoElastica { lambda: f64, kappa0_sq: f64 },
    #[error("frame integration must start inside the model")]
    StartOutsideModel,
    #[error("need at least two samples and one substep")]
    BadSampling,
    #[error("figure-eight shooting failed for λ = {lambda}: {reason}")]
    Shooting { lambda: f64, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
