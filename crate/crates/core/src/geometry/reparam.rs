//! Arc-length reparametrization through a local quintic interpolant.

use super::{GeometryError, Model, SampledCurve, Topology, Vec2};

/// Which arc length the output should be uniform in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedWeight {
    Euclidean,
    Hyperbolic,
}

const GL_X: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_W: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// Piecewise quintic through six consecutive nodes around each edge.
pub struct CurveInterpolant<'a> {
    curve: &'a SampledCurve,
}

fn lagrange6(x: f64) -> ([f64; 6], [f64; 6]) {
    // denominators Π_{k≠m}(m − k) for nodes 0..5
    const DEN: [f64; 6] = [-120.0, 24.0, -12.0, 12.0, -24.0, 120.0];
    let mut val = [0.0; 6];
    let mut der = [0.0; 6];
    for m in 0..6 {
        let mut prod = 1.0;
        let mut dsum = 0.0;
        for k in 0..6 {
            if k == m {
                continue;
            }
            let mut p = 1.0;
            for j in 0..6 {
                if j != m && j != k {
                    p *= x - j as f64;
                }
            }
            dsum += p;
            prod *= x - k as f64;
        }
        val[m] = prod / DEN[m];
        der[m] = dsum / DEN[m];
    }
    (val, der)
}

impl<'a> CurveInterpolant<'a> {
    pub fn new(curve: &'a SampledCurve) -> Self {
        CurveInterpolant { curve }
    }

    pub fn segments(&self) -> usize {
        match self.curve.topology {
            Topology::Closed => self.curve.len(),
            Topology::Open => self.curve.len() - 1,
        }
    }

    /// Position and derivative (per unit of local parameter) at fraction `tau` of edge `seg`.
    pub fn eval(&self, seg: usize, tau: f64) -> (Vec2, Vec2) {
        let n = self.curve.len();
        let nodes = &self.curve.nodes;
        let (start, local): (isize, f64) = match self.curve.topology {
            Topology::Closed => (seg as isize - 2, 2.0 + tau),
            Topology::Open => {
                let s = (seg as isize - 2).clamp(0, n as isize - 6);
                (s, (seg as isize - s) as f64 + tau)
            }
        };
        let (l, dl) = lagrange6(local);
        let mut p = Vec2::ZERO;
        let mut d = Vec2::ZERO;
        for m in 0..6 {
            let idx = (start + m as isize).rem_euclid(n as isize) as usize;
            p += nodes[idx] * l[m];
            d += nodes[idx] * dl[m];
        }
        (p, d)
    }

    fn speed(&self, weight: SpeedWeight, seg: usize, tau: f64) -> f64 {
        let (p, d) = self.eval(seg, tau);
        let w = match (weight, self.curve.model) {
            (SpeedWeight::Euclidean, _) => 1.0,
            (SpeedWeight::Hyperbolic, Model::Disk) => 2.0 / (1.0 - p.norm_sq()).max(super::BOUNDARY_FLOOR),
            (SpeedWeight::Hyperbolic, Model::HalfPlane) => 1.0 / p.y.max(f64::MIN_POSITIVE),
        };
        w * d.norm()
    }

    /// Arc length of edge `seg` from its start to fraction `tau`.
    pub fn partial_length(&self, weight: SpeedWeight, seg: usize, tau: f64) -> f64 {
        let half = 0.5 * tau;
        let mut acc = 0.0;
        for k in 0..8 {
            acc += GL_W[k] * self.speed(weight, seg, half * (GL_X[k] + 1.0));
        }
        acc * half
    }

    pub fn segment_lengths(&self, weight: SpeedWeight) -> Vec<f64> {
        (0..self.segments()).map(|s| self.partial_length(weight, s, 1.0)).collect()
    }

    /// Fraction within edge `seg` at which the partial arc length equals `target`.
    pub fn invert(&self, weight: SpeedWeight, seg: usize, seg_len: f64, target: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut tau = (target / seg_len).clamp(0.0, 1.0);
        for _ in 0..40 {
            let g = self.partial_length(weight, seg, tau) - target;
            if g.abs() <= 1e-15 * seg_len.max(1e-300) {
                break;
            }
            if g > 0.0 {
                hi = tau;
            } else {
                lo = tau;
            }
            let sp = self.speed(weight, seg, tau);
            let mut next = tau - g / sp;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (next - tau).abs() < 1e-16 {
                tau = next;
                break;
            }
            tau = next;
        }
        tau
    }
}

/// Cumulative arc length at each node divided by the total (closed curves end below 1).
pub fn arclength_fractions(curve: &SampledCurve, weight: SpeedWeight) -> Vec<f64> {
    let it = CurveInterpolant::new(curve);
    let seg = it.segment_lengths(weight);
    let total: f64 = seg.iter().sum();
    let mut out = Vec::with_capacity(curve.len());
    let mut acc = 0.0;
    out.push(0.0);
    for s in seg.iter().take(curve.len() - 1) {
        acc += s;
        out.push(acc / total);
    }
    out
}

/// Resample so that consecutive nodes are equally spaced in the chosen arc length.
///
/// Node 0 is kept; for open curves the last node is kept as well.
pub fn reparam_constant_speed(
    curve: &SampledCurve,
    weight: SpeedWeight,
    target_domain: (f64, f64),
) -> Result<SampledCurve, GeometryError> {
    resample_constant_speed(curve, weight, target_domain, curve.len())
}

/// As [`reparam_constant_speed`] but with `m` output nodes.
pub fn resample_constant_speed(
    curve: &SampledCurve,
    weight: SpeedWeight,
    target_domain: (f64, f64),
    m: usize,
) -> Result<SampledCurve, GeometryError> {
    if m < super::MIN_NODES {
        return Err(GeometryError::TooFewNodes { n: m, min: super::MIN_NODES });
    }
    let it = CurveInterpolant::new(curve);
    let seg = it.segment_lengths(weight);
    let n = curve.len();
    let mut cum = Vec::with_capacity(seg.len() + 1);
    cum.push(0.0);
    for s in &seg {
        cum.push(cum.last().unwrap() + s);
    }
    let total = *cum.last().unwrap();
    let (intervals, last) = match curve.topology {
        Topology::Closed => (m as f64, m),
        Topology::Open => ((m - 1) as f64, m - 1),
    };
    let mut nodes = Vec::with_capacity(m);
    nodes.push(curve.nodes[0]);
    let mut j = 0usize;
    for k in 1..last {
        let sigma = total * k as f64 / intervals;
        while j + 1 < seg.len() && cum[j + 1] <= sigma {
            j += 1;
        }
        let tau = it.invert(weight, j, seg[j], sigma - cum[j]);
        nodes.push(it.eval(j, tau).0);
    }
    if curve.topology == Topology::Open {
        nodes.push(curve.nodes[n - 1]);
    }
    SampledCurve::new(curve.model, curve.topology, nodes, target_domain)
}

/// Constant Euclidean speed on `target_domain`.
pub fn reparam_constant_euclidean_speed(
    curve: &SampledCurve,
    target_domain: (f64, f64),
) -> Result<SampledCurve, GeometryError> {
    reparam_constant_speed(curve, SpeedWeight::Euclidean, target_domain)
}
