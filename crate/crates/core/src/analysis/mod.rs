//! Post-processing of finished runs: singular parameters, quantization accounting,
//! blow-ups and the integral inequalities for half-plane profiles.

mod blowup;
mod dips;
mod inequalities;
mod quantization;
mod singular;
mod suite;

pub use blowup::{blow_up, blow_up_run, catenary_reference, BlowUpResult};
pub use dips::{dip_count, Dip, DipReport};
pub use inequalities::{
    est_dxu1_check, gauss_bonnet_integral, length_ratio_holds, willmore_direct, willmore_energy, WillmoreCheck,
};
pub use quantization::{
    classify_segment, energy_density, quantization_report, report_for_curve, QuantizationReport, SegmentClass, GRAD_NORM_THRESHOLD,
};
pub use suite::{inequality_suite, InequalityStat, InequalitySuite};
pub use singular::{
    detect_singular_params, detect_singular_params_in, euclidean_params, param_distance, window_indices,
    window_length_trend, WindowTrend,
};

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("run has no frames")]
    EmptyRun,
    #[error("window around {x} contains {clusters} singular clusters")]
    Window { x: f64, clusters: usize },
    #[error("window around {x} holds too few nodes")]
    SmallWindow { x: f64 },
    #[error("profile endpoint lies below the shoulder height {alpha}")]
    Shoulder { alpha: f64 },
    #[error("invalid thresholds: need alpha > delta_height > 0")]
    Thresholds,
    #[error("operation requires {0}")]
    Requirement(&'static str),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
