//! Invariant monitors evaluated on frames.

use std::f64::consts::PI;

use crate::geometry::{SampledCurve, Topology};

use super::FlowError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    /// `γ(−x) = −γ(x)` on `[−2, 2)`.
    S1,
    /// `γ(±1 − x) = Rγ(±1 + x)` with `R = diag(−1, 1)`.
    S2,
    /// `γ(−x) = Rγ(x)` on `[−1, 1]`.
    S2Prime,
}

impl Symmetry {
    pub fn as_str(self) -> &'static str {
        match self {
            Symmetry::S1 => "s1",
            Symmetry::S2 => "s2",
            Symmetry::S2Prime => "s2prime",
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
}

fn check_grid(curve: &SampledCurve, which: Symmetry) -> Result<(), FlowError> {
    let n = curve.len();
    let (a, b) = curve.domain;
    let ok = match which {
        Symmetry::S1 | Symmetry::S2 => {
            curve.topology == Topology::Closed && n % 4 == 0 && close(a, -2.0) && close(b, 2.0)
        }
        Symmetry::S2Prime => curve.topology == Topology::Open && close(a, -1.0) && close(b, 1.0),
    };
    if ok {
        Ok(())
    } else {
        Err(FlowError::AsymmetricGrid(which))
    }
}

/// Sup-norm residual of a symmetry identity over the nodes.
pub fn symmetry_monitor(curve: &SampledCurve, which: Symmetry) -> Result<f64, FlowError> {
    check_grid(curve, which)?;
    let p = &curve.nodes;
    let n = p.len();
    let mut r: f64 = 0.0;
    match which {
        Symmetry::S1 => {
            // x_i = −2 + ih, so −x_i is node N − i
            for i in 0..n {
                r = r.max((p[(n - i) % n] + p[i]).norm());
            }
        }
        Symmetry::S2 => {
            for centre in [n / 4, 3 * n / 4] {
                for j in 0..=n / 4 {
                    let l = (centre + n - j) % n;
                    let u = (centre + j) % n;
                    r = r.max((p[l] - p[u].mirror_x()).norm());
                }
            }
        }
        Symmetry::S2Prime => {
            for i in 0..n {
                r = r.max((p[n - 1 - i] - p[i].mirror_x()).norm());
            }
        }
    }
    Ok(r)
}

/// Largest distance from the origin of the nodes at parameters `0` and `±2`.
pub fn origin_pin_residual(curve: &SampledCurve) -> Result<f64, FlowError> {
    check_grid(curve, Symmetry::S1)?;
    Ok(curve.nodes[0].norm().max(curve.nodes[curve.len() / 2].norm()))
}

/// The length bound `𝓛_hyp ≥ 4π²/E(γ₀)` for closed curves, with additive slack `tol`.
pub fn fenchel_check(hyp_length: f64, initial_energy: f64, tol: f64) -> bool {
    if !(initial_energy > 0.0) {
        return hyp_length.is_finite();
    }
    hyp_length >= 4.0 * PI * PI / initial_energy - tol
}

/// Worst ratio `euc_length / running median` over frames with `t > t_end/4`.
///
/// The running median at frame `k` is taken over the late frames up to `k`.
pub fn euclidean_length_ratio(times: &[f64], euc_lengths: &[f64], t_end: f64) -> f64 {
    let mut seen: Vec<f64> = Vec::new();
    let mut worst: f64 = 0.0;
    for (&t, &l) in times.iter().zip(euc_lengths) {
        if t <= t_end / 4.0 {
            continue;
        }
        let pos = seen.partition_point(|&v| v < l);
        seen.insert(pos, l);
        let m = seen.len();
        let med = if m % 2 == 1 { seen[m / 2] } else { 0.5 * (seen[m / 2 - 1] + seen[m / 2]) };
        worst = worst.max(l / med);
    }
    worst
}

/// Symmetry residuals stored with a frame.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SymmetryResiduals {
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub s2prime: Option<f64>,
    /// Distance of the parameter-0 and ±2 nodes from the origin.
    pub origin: Option<f64>,
}

impl SymmetryResiduals {
    /// Every monitor whose grid requirement the curve meets.
    pub fn measure(curve: &SampledCurve) -> Option<Self> {
        let s1 = symmetry_monitor(curve, Symmetry::S1).ok();
        let s2 = symmetry_monitor(curve, Symmetry::S2).ok();
        let s2prime = symmetry_monitor(curve, Symmetry::S2Prime).ok();
        let origin = origin_pin_residual(curve).ok();
        if s1.is_none() && s2.is_none() && s2prime.is_none() {
            return None;
        }
        Some(SymmetryResiduals { s1, s2, s2prime, origin })
    }

    pub fn max(&self) -> f64 {
        [self.s1, self.s2, self.s2prime].iter().flatten().fold(0.0, |a: f64, &b| a.max(b))
    }
}
