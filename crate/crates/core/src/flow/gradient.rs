//! `L²(ds)` gradient of the elastic energy, `∇E = (2κ_ss + κ³ − 2κ) n⃗`, and the exact
//! gradient of its quadrature.

use serde::{Deserialize, Serialize};

use crate::geometry::{covariant_accel, fd, GeometryError, SampledCurve, Topology, Vec2};

use super::step::ClampedData;

/// Vector field driving the flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientKind {
    /// `(2κ_ss + κ³ − 2κ)n⃗` by finite differences.
    FirstVariation,
    /// Normal part of the node derivatives of the quadrature energy, divided by the lumped mass `f²ds`.
    DiscreteEnergy,
}

/// Scratch buffers and results of one gradient evaluation.
#[derive(Debug, Clone, Default)]
pub struct GradientEval {
    pub d1: Vec<Vec2>,
    pub d2: Vec<Vec2>,
    pub kappa: Vec<f64>,
    kx: Vec<f64>,
    kxx: Vec<f64>,
    /// `|∂ₓγ|_g` per node.
    pub hyp_speed: Vec<f64>,
    /// log-derivative of the hyperbolic speed, `∂ₓ|∂ₓγ|_g / |∂ₓγ|_g`.
    speed_log_dx: Vec<f64>,
    /// Quadrature weights `ds`.
    pub ds: Vec<f64>,
    /// Scalar normal component `2κ_ss + κ³ − 2κ`.
    pub normal_component: Vec<f64>,
    /// Chart components of `∇E`.
    pub grad: Vec<Vec2>,
    pub energy: f64,
    /// `∫|∇E|_g² ds`.
    pub grad_norm_sq: f64,
    /// Smallest `|∂ₓγ|_g·h`.
    pub min_spacing: f64,
    /// `∂E_h/∂pⱼ` (discrete kind only), reduced to the free coordinates for clamped curves.
    pub energy_grad: Vec<Vec2>,
    part_d1: Vec<Vec2>,
    part_d2: Vec<Vec2>,
}

impl GradientEval {
    fn resize(&mut self, n: usize) {
        for v in [&mut self.d1, &mut self.d2, &mut self.grad, &mut self.energy_grad, &mut self.part_d1, &mut self.part_d2] {
            v.resize(n, Vec2::ZERO);
        }
        for v in [
            &mut self.kappa,
            &mut self.kx,
            &mut self.kxx,
            &mut self.hyp_speed,
            &mut self.speed_log_dx,
            &mut self.ds,
            &mut self.normal_component,
        ] {
            v.resize(n, 0.0);
        }
    }

    /// Evaluate energy and gradient of `curve` into the buffers.
    pub fn evaluate(&mut self, curve: &SampledCurve) -> Result<(), GeometryError> {
        let n = curve.len();
        if n < 6 {
            return Err(GeometryError::TooFewNodes { n, min: 6 });
        }
        self.resize(n);
        let h = curve.step();
        let topo = curve.topology;
        let model = curve.model;
        fd::d1_into(&curve.nodes, h, topo, &mut self.d1);
        fd::d2_into(&curve.nodes, h, topo, &mut self.d2);
        let mut energy = 0.0;
        let mut min_spacing = f64::INFINITY;
        for i in 0..n {
            let p = curve.nodes[i];
            let f = crate::geometry::metric_factor(p, model)?;
            let (a, b) = (self.d1[i], self.d2[i]);
            let e2 = a.norm_sq();
            if !(e2 > 0.0) || !e2.is_finite() {
                return Err(GeometryError::Immersion { index: i });
            }
            let e = e2.sqrt();
            let v = f * e;
            let acc = covariant_accel(model, p, a, b);
            // κ = f²⟨(∇ₓγ')^⊥, J γ'/v⟩/v²
            let k = acc.dot(a.perp()) / (f * e2 * e);
            self.kappa[i] = k;
            self.hyp_speed[i] = v;
            self.speed_log_dx[i] = model.log_factor_grad(p).dot(a) + a.dot(b) / e2;
            let w = fd::trapezoid_weight(i, n, topo) * h;
            self.ds[i] = w * v;
            energy += k * k * self.ds[i];
            min_spacing = min_spacing.min(v * h);
        }
        fd::d1_into(&self.kappa, h, topo, &mut self.kx);
        fd::d2_into(&self.kappa, h, topo, &mut self.kxx);
        let mut gn = 0.0;
        for i in 0..n {
            let v = self.hyp_speed[i];
            let k = self.kappa[i];
            let kss = (self.kxx[i] - self.kx[i] * self.speed_log_dx[i]) / (v * v);
            let g = 2.0 * kss + k * k * k - 2.0 * k;
            self.normal_component[i] = g;
            self.grad[i] = self.d1[i].perp() * (g / v);
            gn += g * g * self.ds[i];
        }
        if topo == Topology::Open {
            self.grad[0] = Vec2::ZERO;
            self.grad[n - 1] = Vec2::ZERO;
        }
        self.energy = energy;
        self.grad_norm_sq = gn;
        self.min_spacing = min_spacing;
        Ok(())
    }
}

impl GradientEval {
    /// Evaluate with the chosen kind; `clamp` removes the constrained coordinates of open curves.
    pub fn evaluate_kind(
        &mut self,
        curve: &SampledCurve,
        kind: GradientKind,
        clamp: Option<&ClampedData>,
    ) -> Result<(), GeometryError> {
        match kind {
            GradientKind::FirstVariation => self.evaluate(curve),
            GradientKind::DiscreteEnergy => self.evaluate_discrete(curve, clamp),
        }
    }

    /// Exact gradient of `Σ wᵢh·vᵢκᵢ²` with respect to the node positions.
    ///
    /// Per node the summand is `c·A²/(f|γ'|⁵)` with `A = γ'×γ'' − |γ'|²(γ'×∇φ)`.
    pub fn evaluate_discrete(&mut self, curve: &SampledCurve, clamp: Option<&ClampedData>) -> Result<(), GeometryError> {
        let n = curve.len();
        if n < 6 {
            return Err(GeometryError::TooFewNodes { n, min: 6 });
        }
        self.resize(n);
        let h = curve.step();
        let topo = curve.topology;
        let model = curve.model;
        fd::d1_into(&curve.nodes, h, topo, &mut self.d1);
        fd::d2_into(&curve.nodes, h, topo, &mut self.d2);
        let mut energy = 0.0;
        let mut min_spacing = f64::INFINITY;
        for i in 0..n {
            let p = curve.nodes[i];
            let f = crate::geometry::metric_factor(p, model)?;
            let (a, b) = (self.d1[i], self.d2[i]);
            let e2 = a.norm_sq();
            if !(e2 > 0.0) || !e2.is_finite() {
                return Err(GeometryError::Immersion { index: i });
            }
            let e = e2.sqrt();
            let g = model.log_factor_grad(p);
            let hs = model.log_factor_hessian(p);
            let c = fd::trapezoid_weight(i, n, topo) * h;
            let ag = a.cross(g);
            let big_a = a.cross(b) - e2 * ag;
            let q = c / (f * e2 * e2 * e);
            let term = q * big_a * big_a;
            let da = Vec2::new(b.y, -b.x) - a * (2.0 * ag) - Vec2::new(g.y, -g.x) * e2;
            self.part_d1[i] = da * (2.0 * q * big_a) - a * (5.0 * term / e2);
            self.part_d2[i] = a.perp() * (2.0 * q * big_a);
            let dag = Vec2::new(a.x * hs[1][0] - a.y * hs[0][0], a.x * hs[1][1] - a.y * hs[0][1]);
            self.energy_grad[i] = dag * (-2.0 * q * big_a * e2) - g * term;
            let v = f * e;
            self.kappa[i] = big_a / (f * e2 * e);
            self.hyp_speed[i] = v;
            self.ds[i] = c * v;
            energy += term;
            min_spacing = min_spacing.min(v * h);
        }
        fd::d1_adjoint_add(&self.part_d1, h, topo, &mut self.energy_grad);
        fd::d2_adjoint_add(&self.part_d2, h, topo, &mut self.energy_grad);
        if topo == Topology::Open {
            self.energy_grad[0] = Vec2::ZERO;
            self.energy_grad[n - 1] = Vec2::ZERO;
            if let Some(d) = clamp {
                // the normal offset of the node next to each end follows the next three nodes
                for (t, idx) in [(d.start_tangent, [1, 2, 3, 4]), (d.end_tangent, [n - 2, n - 3, n - 4, n - 5])] {
                    let nrm = t.perp() * (1.0 / t.norm());
                    let gn = self.energy_grad[idx[0]].dot(nrm);
                    self.energy_grad[idx[0]] = self.energy_grad[idx[0]] - nrm * gn;
                    for (j, w) in idx[1..].iter().zip([36.0, -16.0, 3.0]) {
                        self.energy_grad[*j] = self.energy_grad[*j] + nrm * (gn * w / 48.0);
                    }
                }
            }
        }
        let mut gn = 0.0;
        for i in 0..n {
            let f = model.factor_unchecked(curve.nodes[i]);
            let mass = f * f * self.ds[i];
            // normal part only; any per-node projection keeps it a descent direction
            let nrm = self.d1[i].perp() * (1.0 / self.d1[i].norm());
            let en = self.energy_grad[i].dot(nrm);
            self.grad[i] = nrm * (en / mass);
            gn += en * en / mass;
            self.normal_component[i] = f * en / mass;
        }
        self.energy = energy;
        self.grad_norm_sq = gn;
        self.min_spacing = min_spacing;
        Ok(())
    }
}

/// Per-node chart components of `∇E`.
pub fn gradient(curve: &SampledCurve) -> Result<Vec<Vec2>, GeometryError> {
    let mut ev = GradientEval::default();
    ev.evaluate(curve)?;
    Ok(ev.grad)
}

/// Discrete pairing `Σ ⟨∇E, V⟩_g ds`.
pub fn pairing(curve: &SampledCurve, grad: &[Vec2], field: &[Vec2]) -> Result<f64, GeometryError> {
    let mut ev = GradientEval::default();
    ev.evaluate(curve)?;
    let mut acc = 0.0;
    for i in 0..curve.len() {
        let f = curve.model.factor_unchecked(curve.nodes[i]);
        acc += f * f * grad[i].dot(field[i]) * ev.ds[i];
    }
    Ok(acc)
}
