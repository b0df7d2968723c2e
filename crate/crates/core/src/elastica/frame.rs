//! Reconstruction of a curve from its curvature by integrating the moving frame.
//!
//! The state is the chart position and the Euclidean angle `θ` of the tangent; with
//! unit hyperbolic speed the position moves at Euclidean speed `1/f` and
//! `θ' = κ + ⟨∇φ, ν⟩/f`, where `ν` is the Euclidean unit normal.

use serde::{Deserialize, Serialize};

use crate::geometry::{Model, SampledCurve, Topology, Vec2};

use super::ElasticaError;

/// Initial position and tangent angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FramePose {
    pub position: Vec2,
    pub tangent_angle: f64,
}

#[derive(Debug, Clone, Copy)]
struct State {
    p: Vec2,
    theta: f64,
}

#[inline]
fn rhs(model: Model, kappa: f64, st: State) -> State {
    let (s, c) = st.theta.sin_cos();
    match model {
        Model::Disk => {
            let w = 0.5 * (1.0 - st.p.norm_sq());
            State { p: Vec2::new(w * c, w * s), theta: kappa - st.p.x * s + st.p.y * c }
        }
        Model::HalfPlane => State { p: Vec2::new(st.p.y * c, st.p.y * s), theta: kappa - c },
    }
}

#[inline]
fn axpy(a: State, k: f64, b: State) -> State {
    State { p: a.p + b.p * k, theta: a.theta + k * b.theta }
}

/// Classical RK4 step of length `ds` starting at arc length `s`.
fn rk4(model: Model, kappa: &dyn Fn(f64) -> f64, s: f64, ds: f64, st: State) -> State {
    let k1 = rhs(model, kappa(s), st);
    let k2 = rhs(model, kappa(s + 0.5 * ds), axpy(st, 0.5 * ds, k1));
    let k3 = rhs(model, kappa(s + 0.5 * ds), axpy(st, 0.5 * ds, k2));
    let k4 = rhs(model, kappa(s + ds), axpy(st, ds, k3));
    State {
        p: st.p + (k1.p + k2.p * 2.0 + k3.p * 2.0 + k4.p) * (ds / 6.0),
        theta: st.theta + (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta) * (ds / 6.0),
    }
}

/// Samples of an integrated frame.
#[derive(Debug, Clone)]
pub struct FrameTrack {
    pub s: Vec<f64>,
    pub positions: Vec<Vec2>,
    pub angles: Vec<f64>,
    /// Set when the trajectory left the model and the track was cut short.
    pub truncated: bool,
}

impl FrameTrack {
    /// The samples as an open curve parametrized by arc length.
    pub fn to_curve(&self, model: Model) -> Result<SampledCurve, ElasticaError> {
        let a = self.s[0];
        let b = *self.s.last().unwrap();
        Ok(SampledCurve::new(model, Topology::Open, self.positions.clone(), (a, b))?)
    }
}

/// Integrate `∂ₛγ = T`, `∇ₛT = κ n⃗` from `start` over `s_range`, recording `samples`
/// equally spaced points and taking `substeps` RK4 steps between consecutive samples.
pub fn integrate_frame(
    kappa: &dyn Fn(f64) -> f64,
    start: FramePose,
    model: Model,
    s_range: (f64, f64),
    samples: usize,
    substeps: usize,
) -> Result<FrameTrack, ElasticaError> {
    if !model.contains(start.position) {
        return Err(ElasticaError::StartOutsideModel);
    }
    if samples < 2 || substeps == 0 {
        return Err(ElasticaError::BadSampling);
    }
    let (s0, s1) = s_range;
    let h = (s1 - s0) / (samples - 1) as f64;
    let ds = h / substeps as f64;
    let mut st = State { p: start.position, theta: start.tangent_angle };
    let mut out = FrameTrack {
        s: vec![s0],
        positions: vec![st.p],
        angles: vec![st.theta],
        truncated: false,
    };
    for k in 1..samples {
        let base = s0 + (k - 1) as f64 * h;
        for j in 0..substeps {
            st = rk4(model, kappa, base + j as f64 * ds, ds, st);
        }
        let inside = match model {
            Model::Disk => 1.0 - st.p.norm_sq() >= crate::geometry::BOUNDARY_FLOOR,
            Model::HalfPlane => st.p.y > 0.0,
        };
        if !inside || !st.p.is_finite() {
            out.truncated = true;
            break;
        }
        out.s.push(s0 + k as f64 * h);
        out.positions.push(st.p);
        out.angles.push(st.theta);
    }
    Ok(out)
}

/// End state only, for shooting.
pub fn integrate_endpoint(
    kappa: &dyn Fn(f64) -> f64,
    start: FramePose,
    model: Model,
    s_range: (f64, f64),
    steps: usize,
) -> FramePose {
    let ds = (s_range.1 - s_range.0) / steps as f64;
    let mut st = State { p: start.position, theta: start.tangent_angle };
    for j in 0..steps {
        st = rk4(model, kappa, s_range.0 + j as f64 * ds, ds, st);
    }
    FramePose { position: st.p, tangent_angle: st.theta }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{signed_curvature, CurveGeometry};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn zero_curvature_upwards_is_a_vertical_ray() {
        let start = FramePose { position: Vec2::new(0.0, 1.0), tangent_angle: FRAC_PI_2 };
        let tr = integrate_frame(&|_| 0.0, start, Model::HalfPlane, (0.0, 3.0), 31, 10).unwrap();
        for (s, p) in tr.s.iter().zip(&tr.positions) {
            assert!(p.x.abs() < 1e-12);
            assert!((p.y - s.exp()).abs() < 1e-9 * s.exp());
        }
    }

    #[test]
    fn unit_speed_and_curvature_are_reproduced() {
        let k = |s: f64| 0.8 + 0.5 * (1.3 * s).sin();
        let start = FramePose { position: Vec2::new(0.1, -0.2), tangent_angle: 0.4 };
        let tr = integrate_frame(&k, start, Model::Disk, (0.0, 6.0), 601, 8).unwrap();
        let c = tr.to_curve(Model::Disk).unwrap();
        let g = CurveGeometry::new(&c).unwrap();
        for v in &g.hyp_speed {
            assert!((v - 1.0).abs() < 1e-8);
        }
        let kap = signed_curvature(&c).unwrap();
        for (i, s) in tr.s.iter().enumerate() {
            assert!((kap[i] - k(*s)).abs() < 1e-6, "node {i}");
        }
    }
}
