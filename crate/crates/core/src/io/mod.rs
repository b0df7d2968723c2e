//! Files: curve CSV, run archives and SVG plots.

mod archive;
mod curve_csv;
mod svg;
mod verify;

pub use archive::{
    read_archive, read_energies, read_frames, write_archive, write_energies, write_frames, Provenance,
    QuantizationDigest, RunArchive, RunSummary, ENERGIES_FILE, FRAMES_FILE, PROVENANCE_FILE, SUMMARY_FILE,
};
pub use curve_csv::{read_curve, write_curve};
pub use svg::{render_svg, SvgOptions};
pub use verify::{
    analysis_checks, flow_checks, order_factors, solver_checks, verify_archive, verify_paths, ArchiveReport, Check, Status,
    VerifyReport, DEFAULT_DELTA, DEFAULT_EPS,
};

use std::path::PathBuf;

use thiserror::Error;

use crate::geometry::GeometryError;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error("{path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
