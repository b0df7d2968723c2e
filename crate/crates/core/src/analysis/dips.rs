//! Excursions of a half-plane profile towards the boundary `u² = 0`.

use serde::{Deserialize, Serialize};

use crate::geometry::{Model, SampledCurve, Topology};

use super::quantization::energy_density;
use super::AnalysisError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dip {
    /// Shoulder nodes bounding the dip.
    pub start: usize,
    pub end: usize,
    pub min_height: f64,
    /// Energy of the nodes strictly between the shoulders.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipReport {
    pub count: usize,
    pub dips: Vec<Dip>,
    pub total_energy: f64,
}

/// Count excursions between shoulders `u² ≥ alpha` that reach below `delta_height`.
pub fn dip_count(u: &SampledCurve, alpha: f64, delta_height: f64) -> Result<DipReport, AnalysisError> {
    if u.model != Model::HalfPlane {
        return Err(AnalysisError::Requirement("a half-plane curve"));
    }
    if !(alpha > delta_height && delta_height > 0.0) {
        return Err(AnalysisError::Thresholds);
    }
    let n = u.len();
    let dens = energy_density(u)?;
    let total: f64 = dens.iter().sum();
    let shoulder = |i: usize| u.nodes[i].y >= alpha;
    let (start, span) = match u.topology {
        Topology::Open => {
            if !shoulder(0) || !shoulder(n - 1) {
                return Err(AnalysisError::Shoulder { alpha });
            }
            (0, n)
        }
        Topology::Closed => match (0..n).find(|&i| shoulder(i)) {
            Some(s) => (s, n + 1),
            None => return Err(AnalysisError::Shoulder { alpha }),
        },
    };
    let mut dips = Vec::new();
    let mut last = start;
    for k in 1..span {
        let i = (start + k) % n;
        if !shoulder(i) {
            continue;
        }
        if k > 0 && (last + 1) % n != i {
            let mut j = (last + 1) % n;
            let mut min_h = f64::INFINITY;
            let mut e = 0.0;
            while j != i {
                min_h = min_h.min(u.nodes[j].y);
                e += dens[j];
                j = (j + 1) % n;
            }
            if min_h < delta_height {
                dips.push(Dip { start: last, end: i, min_height: min_h, energy: e });
            }
        }
        last = i;
    }
    Ok(DipReport { count: dips.len(), dips, total_energy: total })
}
