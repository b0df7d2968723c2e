//! Sampled curves and their differential-geometric cache.

use serde::{Deserialize, Serialize};

use super::fd::{self, trapezoid_weight};
use super::{phi, GeometryError, Model, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Closed,
    Open,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Closed => "closed",
            Topology::Open => "open",
        }
    }

    pub fn parse(s: &str) -> Option<Topology> {
        match s {
            "closed" => Some(Topology::Closed),
            "open" => Some(Topology::Open),
            _ => None,
        }
    }
}

/// A discretized immersion on a uniform parameter grid.
///
/// Closed curves sample `[a, b)` with step `(b − a)/N`; open curves sample `[a, b]`
/// with step `(b − a)/(N − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    pub model: Model,
    pub topology: Topology,
    pub nodes: Vec<Vec2>,
    pub domain: (f64, f64),
}

pub const MIN_NODES: usize = 8;

impl SampledCurve {
    pub fn new(
        model: Model,
        topology: Topology,
        nodes: Vec<Vec2>,
        domain: (f64, f64),
    ) -> Result<Self, GeometryError> {
        let c = SampledCurve { model, topology, nodes, domain };
        c.validate()?;
        Ok(c)
    }

    /// Default parameter domain: `[0, 1)` or `[0, 1]`.
    pub fn with_unit_domain(model: Model, topology: Topology, nodes: Vec<Vec2>) -> Result<Self, GeometryError> {
        Self::new(model, topology, nodes, (0.0, 1.0))
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let n = self.nodes.len();
        if n < MIN_NODES {
            return Err(GeometryError::TooFewNodes { n, min: MIN_NODES });
        }
        if !(self.domain.1 > self.domain.0) {
            return Err(GeometryError::BadDomain { a: self.domain.0, b: self.domain.1 });
        }
        for p in &self.nodes {
            if !p.is_finite() || !self.model.contains(*p) {
                return Err(GeometryError::InvalidPoint { x: p.x, y: p.y, model: self.model });
            }
        }
        let edges = match self.topology {
            Topology::Closed => n,
            Topology::Open => n - 1,
        };
        for i in 0..edges {
            let j = (i + 1) % n;
            if (self.nodes[j] - self.nodes[i]).norm() == 0.0 {
                return Err(GeometryError::Immersion { index: i });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Uniform parameter step.
    pub fn step(&self) -> f64 {
        let span = self.domain.1 - self.domain.0;
        match self.topology {
            Topology::Closed => span / self.nodes.len() as f64,
            Topology::Open => span / (self.nodes.len() - 1) as f64,
        }
    }

    pub fn param(&self, i: usize) -> f64 {
        self.domain.0 + i as f64 * self.step()
    }

    pub fn params(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.param(i)).collect()
    }

    /// Same nodes, different parameter domain.
    pub fn with_domain(&self, domain: (f64, f64)) -> Self {
        SampledCurve { domain, ..self.clone() }
    }

    /// Apply a point map node by node, tagging the result with `model`.
    pub fn map_nodes(&self, model: Model, f: impl Fn(Vec2) -> Vec2) -> Result<Self, GeometryError> {
        SampledCurve::new(model, self.topology, self.nodes.iter().map(|&p| f(p)).collect(), self.domain)
    }

    pub fn max_abs(&self) -> f64 {
        self.nodes.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }
}

/// Covariant acceleration `∇ₓ∂ₓγ = γ'' + Γ(γ', γ')` of a conformal metric.
///
/// For `g = e^{2φ}δ`, `Γᵏᵢⱼvⁱvʲ = 2vᵏ⟨∇φ, v⟩ − |v|²∂ₖφ`.
#[inline]
pub fn covariant_accel(model: Model, p: Vec2, d1: Vec2, d2: Vec2) -> Vec2 {
    let g = model.log_factor_grad(p);
    d2 + d1 * (2.0 * g.dot(d1)) - g * d1.norm_sq()
}

/// Derived differential data of a sampled curve.
#[derive(Debug, Clone)]
pub struct CurveGeometry {
    pub h: f64,
    pub d1: Vec<Vec2>,
    pub d2: Vec<Vec2>,
    pub factor: Vec<f64>,
    pub euc_speed: Vec<f64>,
    pub hyp_speed: Vec<f64>,
    /// `∂ₛγ` in chart components.
    pub tangent: Vec<Vec2>,
    /// `n⃗ = J∂ₛγ` in chart components.
    pub normal: Vec<Vec2>,
    /// `κ⃗ = ∇ₛ∂ₛγ` in chart components.
    pub curvature_vector: Vec<Vec2>,
    pub kappa: Vec<f64>,
    /// Quadrature weights `ds` (trapezoid in the parameter).
    pub ds: Vec<f64>,
    pub euc_weights: Vec<f64>,
}

impl CurveGeometry {
    pub fn new(curve: &SampledCurve) -> Result<Self, GeometryError> {
        let n = curve.len();
        if n < 6 {
            return Err(GeometryError::TooFewNodes { n, min: 6 });
        }
        let h = curve.step();
        let topo = curve.topology;
        let model = curve.model;
        let d1 = fd::d1(&curve.nodes, h, topo);
        let d2 = fd::d2(&curve.nodes, h, topo);
        let mut factor = Vec::with_capacity(n);
        let mut euc_speed = Vec::with_capacity(n);
        let mut hyp_speed = Vec::with_capacity(n);
        let mut tangent = Vec::with_capacity(n);
        let mut normal = Vec::with_capacity(n);
        let mut curvature_vector = Vec::with_capacity(n);
        let mut kappa = Vec::with_capacity(n);
        let mut ds = Vec::with_capacity(n);
        let mut euc_weights = Vec::with_capacity(n);
        for i in 0..n {
            let p = curve.nodes[i];
            let f = super::metric_factor(p, model)?;
            let e = d1[i].norm();
            if !(e > 0.0) || !e.is_finite() {
                return Err(GeometryError::Immersion { index: i });
            }
            let v = f * e;
            let t = d1[i] * (1.0 / v);
            let nv = t.perp();
            let acc = covariant_accel(model, p, d1[i], d2[i]);
            // remove the tangential part, then divide by v²
            let along = acc.dot(d1[i]) / (e * e);
            let kv = (acc - d1[i] * along) * (1.0 / (v * v));
            let k = f * f * kv.dot(nv);
            let w = trapezoid_weight(i, n, topo) * h;
            factor.push(f);
            euc_speed.push(e);
            hyp_speed.push(v);
            tangent.push(t);
            normal.push(nv);
            curvature_vector.push(kv);
            kappa.push(k);
            ds.push(w * v);
            euc_weights.push(w * e);
        }
        Ok(CurveGeometry {
            h,
            d1,
            d2,
            factor,
            euc_speed,
            hyp_speed,
            tangent,
            normal,
            curvature_vector,
            kappa,
            ds,
            euc_weights,
        })
    }

    pub fn energy(&self) -> f64 {
        self.kappa.iter().zip(&self.ds).map(|(k, w)| k * k * w).sum()
    }

    pub fn hyperbolic_length(&self) -> f64 {
        self.ds.iter().sum()
    }

    pub fn euclidean_length(&self) -> f64 {
        self.euc_weights.iter().sum()
    }
}

/// Signed geodesic curvature per node, via the covariant derivative in the curve's own model.
pub fn signed_curvature(curve: &SampledCurve) -> Result<Vec<f64>, GeometryError> {
    Ok(CurveGeometry::new(curve)?.kappa)
}

/// Signed curvature through the explicit half-plane formula
/// `κ = (u2''u1'u2 − u1''u2'u2 + u1'|u'|²)/|u'|³`, after mapping disk curves through `Φ`.
pub fn signed_curvature_half_plane_formula(curve: &SampledCurve) -> Result<Vec<f64>, GeometryError> {
    let u: Vec<Vec2> = match curve.model {
        Model::HalfPlane => curve.nodes.clone(),
        Model::Disk => {
            for p in &curve.nodes {
                if p.x * p.x + (p.y - 1.0) * (p.y - 1.0) < 1e-28 {
                    return Err(GeometryError::Pole);
                }
            }
            curve.nodes.iter().map(|&p| phi(p)).collect()
        }
    };
    let h = curve.step();
    let d1 = fd::d1(&u, h, curve.topology);
    let d2 = fd::d2(&u, h, curve.topology);
    let mut out = Vec::with_capacity(u.len());
    for i in 0..u.len() {
        let (a, b) = (d1[i], d2[i]);
        let s = a.norm();
        if !(s > 0.0) {
            return Err(GeometryError::Immersion { index: i });
        }
        if !(u[i].y > 0.0) {
            return Err(GeometryError::Boundary { x: u[i].x, y: u[i].y });
        }
        let num = b.y * a.x * u[i].y - b.x * a.y * u[i].y + a.x * s * s;
        out.push(num / (s * s * s));
    }
    Ok(out)
}

pub fn elastic_energy(curve: &SampledCurve) -> Result<f64, GeometryError> {
    Ok(CurveGeometry::new(curve)?.energy())
}

pub fn hyperbolic_length(curve: &SampledCurve) -> Result<f64, GeometryError> {
    Ok(CurveGeometry::new(curve)?.hyperbolic_length())
}

pub fn euclidean_length(curve: &SampledCurve) -> Result<f64, GeometryError> {
    Ok(CurveGeometry::new(curve)?.euclidean_length())
}

/// Total turning of the Euclidean tangent over `2π`, rounded.
pub fn winding_number(curve: &SampledCurve) -> Result<i64, GeometryError> {
    if curve.topology != Topology::Closed {
        return Err(GeometryError::Topology { expected: Topology::Closed });
    }
    let n = curve.len();
    let edge = |i: usize| curve.nodes[(i + 1) % n] - curve.nodes[i];
    let mut total = 0.0;
    for i in 0..n {
        let (a, b) = (edge(i), edge((i + 1) % n));
        total += a.cross(b).atan2(a.dot(b));
    }
    Ok((total / std::f64::consts::TAU).round() as i64)
}

/// Euclidean distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sq();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(ab) / l2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Largest distance from a vertex of `a` to the polyline `b`.
pub fn directed_polyline_distance(a: &[Vec2], b: &[Vec2]) -> f64 {
    let mut worst: f64 = 0.0;
    for &p in a {
        let mut best = f64::INFINITY;
        if b.len() == 1 {
            best = (p - b[0]).norm();
        }
        for w in b.windows(2) {
            best = best.min(point_segment_distance(p, w[0], w[1]));
        }
        worst = worst.max(best);
    }
    worst
}

/// Symmetric Hausdorff distance between two polylines (vertex-to-polyline).
pub fn hausdorff_distance(a: &[Vec2], b: &[Vec2]) -> f64 {
    directed_polyline_distance(a, b).max(directed_polyline_distance(b, a))
}

/// Closed polyline of a closed curve (first node repeated at the end).
pub fn closed_polyline(curve: &SampledCurve) -> Vec<Vec2> {
    let mut v = curve.nodes.clone();
    if curve.topology == Topology::Closed {
        v.push(curve.nodes[0]);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn half_line(n: usize) -> SampledCurve {
        let nodes = (0..n).map(|i| Vec2::new(i as f64 / (n - 1) as f64, 1.0)).collect();
        SampledCurve::new(Model::HalfPlane, Topology::Open, nodes, (0.0, 1.0)).unwrap()
    }

    #[test]
    fn horizontal_line_has_unit_curvature() {
        let c = half_line(20);
        for k in signed_curvature(&c).unwrap() {
            assert!((k - 1.0).abs() < 1e-12);
        }
        for k in signed_curvature_half_plane_formula(&c).unwrap() {
            assert!((k - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vertical_ray_and_diameter_are_geodesics() {
        let n = 40;
        let ray: Vec<Vec2> = (0..n).map(|i| Vec2::new(0.0, (i as f64 * 0.05).exp())).collect();
        let c = SampledCurve::new(Model::HalfPlane, Topology::Open, ray, (0.0, 0.05 * (n - 1) as f64)).unwrap();
        for k in signed_curvature(&c).unwrap() {
            assert!(k.abs() < 1e-9, "{k}");
        }
        let dia: Vec<Vec2> = (0..n).map(|i| Vec2::new(0.0, -0.8 + 1.6 * i as f64 / (n - 1) as f64)).collect();
        let d = SampledCurve::with_unit_domain(Model::Disk, Topology::Open, dia).unwrap();
        for k in signed_curvature(&d).unwrap() {
            assert_eq!(k, 0.0);
        }
        assert_eq!(elastic_energy(&d).unwrap(), 0.0);
    }

    #[test]
    fn diameter_lengths() {
        let r: f64 = 0.6;
        let n = 801;
        let dia: Vec<Vec2> = (0..n).map(|i| Vec2::new(0.0, -r + 2.0 * r * i as f64 / (n - 1) as f64)).collect();
        let d = SampledCurve::with_unit_domain(Model::Disk, Topology::Open, dia).unwrap();
        assert!((euclidean_length(&d).unwrap() - 2.0 * r).abs() < 1e-12);
        let exact = 2.0 * ((1.0 + r) / (1.0 - r)).ln();
        assert!((hyperbolic_length(&d).unwrap() - exact).abs() < 1e-4);
    }

    #[test]
    fn centred_circle_length_and_curvature() {
        let r: f64 = 0.5;
        let n = 256;
        let pts = (0..n).map(|i| {
            let a = TAU * i as f64 / n as f64;
            Vec2::new(r * a.cos(), r * a.sin())
        });
        let c = SampledCurve::with_unit_domain(Model::Disk, Topology::Closed, pts.collect()).unwrap();
        let l = hyperbolic_length(&c).unwrap();
        let exact = 4.0 * PI * r / (1.0 - r * r);
        assert!((l - exact).abs() < 1e-6 * exact, "{l} vs {exact}");
        // geodesic curvature of a circle of hyperbolic radius ρ is coth ρ = (1 + r²)/(2r)
        for k in signed_curvature(&c).unwrap() {
            assert!((k - (1.0 + r * r) / (2.0 * r)).abs() < 1e-7);
        }
        assert_eq!(winding_number(&c).unwrap(), 1);
    }

    #[test]
    fn christoffel_contraction_matches_tensor() {
        for model in [Model::Disk, Model::HalfPlane] {
            let p = Vec2::new(0.2, 0.3);
            let v = Vec2::new(-0.7, 1.1);
            let a = Vec2::new(0.4, 0.9);
            let g = model.christoffel(p);
            let vv = [v.x, v.y];
            let mut ex = [a.x, a.y];
            for (k, e) in ex.iter_mut().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        *e += g[k][i][j] * vv[i] * vv[j];
                    }
                }
            }
            let c = covariant_accel(model, p, v, a);
            assert!((c.x - ex[0]).abs() < 1e-13 && (c.y - ex[1]).abs() < 1e-13);
        }
    }

    #[test]
    fn winding_numbers() {
        let n = 200;
        let double: Vec<Vec2> = (0..n)
            .map(|i| {
                let a = 2.0 * TAU * i as f64 / n as f64;
                Vec2::new(0.4 * a.cos(), 0.4 * a.sin())
            })
            .collect();
        let c = SampledCurve::with_unit_domain(Model::Disk, Topology::Closed, double).unwrap();
        assert_eq!(winding_number(&c).unwrap(), 2);
        let eight: Vec<Vec2> = (0..n)
            .map(|i| {
                let a = TAU * i as f64 / n as f64;
                Vec2::new(0.3 * (2.0 * a).sin(), 0.6 * a.sin())
            })
            .collect();
        let e = SampledCurve::with_unit_domain(Model::Disk, Topology::Closed, eight).unwrap();
        assert_eq!(winding_number(&e).unwrap(), 0);
        assert!(winding_number(&half_line(10)).is_err());
    }

    #[test]
    fn degenerate_edge_is_rejected() {
        let mut nodes: Vec<Vec2> = (0..10).map(|i| Vec2::new(0.05 * i as f64, 0.0)).collect();
        nodes[4] = nodes[3];
        assert!(matches!(
            SampledCurve::with_unit_domain(Model::Disk, Topology::Open, nodes),
            Err(GeometryError::Immersion { index: 3 })
        ));
    }
}
