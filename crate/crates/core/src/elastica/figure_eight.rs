//! Symmetric λ-figure-eights by shooting on one quarter.
//!
//! The quarter starts at the origin where `κ = 0` and ends at the curvature peak,
//! `κ(s) = κ₀ cn(K − rs, p)` for `s ∈ [0, K/r]`. Closing the curve under the two
//! reflections only requires the end tangent to be perpendicular to the end position;
//! the modulus `p` is the shooting parameter.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::geometry::{elastic_energy, Model, SampledCurve, Topology, Vec2};

use super::classify::{wave_like, ElasticaParams};
use super::frame::{integrate_endpoint, integrate_frame, FramePose};
use super::jacobi::{complete_integrals, jacobi_cn, EllipticModulus};
use super::ElasticaError;

/// Upper end of the admissible λ range, `64/π² − 2`.
pub const LAMBDA_MAX: f64 = 64.0 / (std::f64::consts::PI * std::f64::consts::PI) - 2.0;

#[derive(Debug, Clone)]
pub struct FigureEight {
    pub curve: SampledCurve,
    pub params: ElasticaParams,
    /// Hyperbolic length of one quarter.
    pub quarter_length: f64,
    /// Upper tip, at parameter 1.
    pub tip: Vec2,
    /// Residual of the shooting condition at the accepted modulus.
    pub shooting_residual: f64,
}

fn modulus_from(q: f64) -> f64 {
    1.0 - (1.0 - FRAC_1_SQRT_2) * (-q).exp()
}

struct Quarter {
    params: ElasticaParams,
    k: f64,
    length: f64,
}

impl Quarter {
    fn new(lambda: f64, p: f64) -> Result<Self, ElasticaError> {
        let params = wave_like(lambda, p)?;
        let (k, _) = complete_integrals(EllipticModulus::new(p).unwrap());
        Ok(Quarter { params, k, length: k / params.rate })
    }

    fn kappa(&self) -> impl Fn(f64) -> f64 + '_ {
        let m = EllipticModulus::new(self.params.modulus).unwrap();
        let k0 = self.params.kappa0_sq.sqrt();
        move |s: f64| k0 * jacobi_cn(self.k - self.params.rate * s, m)
    }

    fn steps(&self) -> usize {
        ((self.length * 4000.0).ceil() as usize).max(4000)
    }

    fn end(&self, steps: usize) -> FramePose {
        let start = FramePose { position: Vec2::ZERO, tangent_angle: 0.0 };
        integrate_endpoint(&self.kappa(), start, Model::Disk, (0.0, self.length), steps)
    }
}

/// `(⟨T, P⟩, ⟨T, JP⟩)` at the end of the quarter; the first must vanish, the second be positive.
fn shoot_with(lambda: f64, p: f64, coarse: bool) -> Result<(f64, f64), ElasticaError> {
    let q = Quarter::new(lambda, p)?;
    let steps = if coarse { q.steps() / 8 } else { q.steps() };
    let e = q.end(steps);
    let t = Vec2::new(e.tangent_angle.cos(), e.tangent_angle.sin());
    let pos = e.position;
    Ok((t.dot(pos) / pos.norm().max(1e-300), pos.cross(t) / pos.norm().max(1e-300)))
}

fn shoot(lambda: f64, p: f64) -> Result<(f64, f64), ElasticaError> {
    shoot_with(lambda, p, false)
}

/// Shooting residual for diagnostics.
pub fn shooting_residual(lambda: f64, p: f64) -> Result<f64, ElasticaError> {
    Ok(shoot(lambda, p)?.0)
}

/// Solve for the modulus, scanning from the asymptotically geodesic end `p → 1`.
fn solve_modulus(lambda: f64) -> Result<(f64, f64), ElasticaError> {
    let fail = |reason: String| ElasticaError::Shooting { lambda, reason };
    let grid: Vec<f64> = (0..=120).map(|i| 30.0 - 0.25 * i as f64).collect();
    let mut prev: Option<(f64, f64)> = None;
    for &q in &grid {
        let p = modulus_from(q);
        if !(p > FRAC_1_SQRT_2 && p < 1.0) {
            continue;
        }
        let (g, orient) = shoot_with(lambda, p, true)?;
        if let Some((q0, g0)) = prev {
            if g0.signum() != g.signum() && orient > 0.0 {
                let q = refine(lambda, q0, q)?;
                let p = modulus_from(q);
                let (res, orient) = shoot(lambda, p)?;
                if orient <= 0.0 {
                    return Err(fail("root has the wrong orientation".into()));
                }
                return Ok((p, res));
            }
        }
        prev = Some((q, g));
    }
    Err(fail("no sign change of the closure condition on the modulus grid".into()))
}

/// Illinois false position on `q`, falling back to bisection when the bracket stalls.
fn refine(lambda: f64, a0: f64, b0: f64) -> Result<f64, ElasticaError> {
    let g = |q: f64| shoot(lambda, modulus_from(q)).map(|r| r.0);
    let (mut a, mut b) = (a0, b0);
    let (mut ga, mut gb) = (g(a)?, g(b)?);
    if ga == 0.0 {
        return Ok(a);
    }
    if gb == 0.0 {
        return Ok(b);
    }
    if ga.signum() == gb.signum() {
        // the coarse scan can misplace a bracket by one cell; widen once
        let (wa, wb) = (a + 0.25, b - 0.25);
        let (wga, wgb) = (g(wa)?, g(wb)?);
        if wga.signum() == gb.signum() && wga.signum() != wgb.signum() {
            a = wb;
            ga = wgb;
        } else if wgb.signum() == ga.signum() && wga.signum() != wgb.signum() {
            b = wa;
            gb = wga;
        } else if wga.signum() != ga.signum() {
            b = wa;
            gb = wga;
        } else if wgb.signum() != gb.signum() {
            a = wb;
            ga = wgb;
        } else {
            return Err(ElasticaError::Shooting { lambda, reason: "lost the bracket".into() });
        }
    }
    let mut side = 0i8;
    for it in 0..200 {
        let mut c = (a * gb - b * ga) / (gb - ga);
        if !(c > a.min(b) && c < a.max(b)) || it % 8 == 7 {
            c = 0.5 * (a + b);
        }
        let gc = g(c)?;
        if gc == 0.0 || (modulus_from(a) - modulus_from(b)).abs() <= 2e-16 {
            return Ok(c);
        }
        if gc.signum() == ga.signum() {
            a = c;
            ga = gc;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            gb = gc;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
        if (a - b).abs() < 1e-15 {
            break;
        }
    }
    Ok(if ga.abs() < gb.abs() { a } else { b })
}

/// Closed λ-figure-eight on `[−2, 2)` with `n` nodes (a multiple of 4), uniform in arc length.
///
/// Node `n/2` sits at parameter 0 (the origin) and the tips at parameters `±1` lie on the
/// vertical axis.
pub fn construct_lambda_figure_eight(lambda: f64, tol: f64, n: usize) -> Result<FigureEight, ElasticaError> {
    if !(lambda > 0.0 && lambda < LAMBDA_MAX) {
        return Err(ElasticaError::InvalidLambda(lambda));
    }
    if n % 4 != 0 || n < 32 {
        return Err(ElasticaError::BadSampling);
    }
    let (p, residual) = solve_modulus(lambda)?;
    if residual.abs() > tol {
        return Err(ElasticaError::Shooting {
            lambda,
            reason: format!("closure residual {residual:e} above tolerance {tol:e}"),
        });
    }
    let q = Quarter::new(lambda, p)?;
    let nq = n / 4;
    let substeps = (q.steps() / nq).max(16);
    let start = FramePose { position: Vec2::ZERO, tangent_angle: 0.0 };
    let tr = integrate_frame(&q.kappa(), start, Model::Disk, (0.0, q.length), nq + 1, substeps)?;
    // rotate the tip onto the positive vertical axis
    let end = tr.positions[nq];
    let alpha = std::f64::consts::FRAC_PI_2 - end.y.atan2(end.x);
    let (sa, ca) = alpha.sin_cos();
    let rot = |v: Vec2| Vec2::new(ca * v.x - sa * v.y, sa * v.x + ca * v.y);
    let mut quarter: Vec<Vec2> = tr.positions.iter().map(|&v| rot(v)).collect();
    quarter[0] = Vec2::ZERO;
    quarter[nq].x = 0.0;
    // parameters 4j/n for j = 0..=n/2
    let half: Vec<Vec2> = (0..=n / 2)
        .map(|j| if j <= nq { quarter[j] } else { quarter[n / 2 - j].mirror_x() })
        .collect();
    let mut nodes = vec![Vec2::ZERO; n];
    for j in 0..n / 2 {
        nodes[n / 2 + j] = half[j];
    }
    for j in 1..=n / 2 {
        nodes[n / 2 - j] = -half[j];
    }
    let curve = SampledCurve::new(Model::Disk, Topology::Closed, nodes, (-2.0, 2.0))?;
    Ok(FigureEight {
        tip: quarter[nq],
        curve,
        params: q.params,
        quarter_length: q.length,
        shooting_residual: residual,
    })
}

/// Energy of the closed figure-eight from the profile: `4κ₀²/(rp²)·(E(p) − (1 − p²)K(p))`.
pub fn figure_eight_energy(params: &ElasticaParams) -> f64 {
    let p = params.modulus;
    let (k, e) = complete_integrals(EllipticModulus::new(p).unwrap());
    4.0 * params.kappa0_sq / (params.rate * p * p) * (e - (1.0 - p * p) * k)
}

/// Quadrature energy of a constructed figure-eight.
pub fn measured_energy(f: &FigureEight) -> f64 {
    elastic_energy(&f.curve).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_changes_sign_for_half() {
        let mut signs = Vec::new();
        for i in 0..12 {
            let p = modulus_from(0.5 + i as f64);
            signs.push(shooting_residual(0.5, p).unwrap().signum());
        }
        assert!(signs.windows(2).any(|w| w[0] != w[1]), "{signs:?}");
    }
}
