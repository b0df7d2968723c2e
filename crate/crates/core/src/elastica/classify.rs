//! Classification of λ-constrained elastica by peak curvature.

use serde::{Deserialize, Serialize};

use super::jacobi::{jacobi_cn, jacobi_dn, EllipticModulus};
use super::ElasticaError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Circular,
    OrbitLike,
    AsymptoticallyGeodesic,
    WaveLike,
    Geodesic,
}

/// Invariants `(λ, κ₀², C, p, r)` of an elastica with `2κ'' + κ³ − (λ+2)κ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticaParams {
    pub lambda: f64,
    pub kappa0_sq: f64,
    pub first_integral: f64,
    pub modulus: f64,
    pub rate: f64,
    pub family: Family,
}

const REL_TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// First integral at the peak, where `κ' = 0`.
pub fn first_integral_at_peak(lambda: f64, kappa0_sq: f64) -> f64 {
    kappa0_sq * kappa0_sq / 4.0 - (lambda + 2.0) * kappa0_sq / 2.0
}

pub fn classify(lambda: f64, kappa0_sq: f64) -> Result<ElasticaParams, ElasticaError> {
    if !(lambda > -2.0) || !lambda.is_finite() {
        return Err(ElasticaError::InvalidLambda(lambda));
    }
    if !(kappa0_sq >= 0.0) || !kappa0_sq.is_finite() {
        return Err(ElasticaError::InvalidCurvature(kappa0_sq));
    }
    let a = lambda + 2.0;
    let b = 2.0 * lambda + 4.0;
    let c = first_integral_at_peak(lambda, kappa0_sq);
    let mk = |family, modulus: f64, rate: f64, first_integral: f64| ElasticaParams {
        lambda,
        kappa0_sq,
        first_integral,
        modulus,
        rate,
        family,
    };
    if kappa0_sq == 0.0 {
        return Ok(mk(Family::Geodesic, 0.0, 0.0, 0.0));
    }
    if close(kappa0_sq, a) {
        return Ok(mk(Family::Circular, 0.0, 0.0, c));
    }
    if kappa0_sq < a {
        return Err(ElasticaError::NoElastica { lambda, kappa0_sq });
    }
    if close(kappa0_sq, b) {
        return Ok(mk(Family::AsymptoticallyGeodesic, 1.0, 0.5 * b.sqrt(), 0.0));
    }
    if kappa0_sq < b {
        // κ₀² = (2λ+4)/(2 − p²)
        let p2 = 2.0 - b / kappa0_sq;
        let rate = 0.5 * (b / (2.0 - p2)).sqrt();
        return Ok(mk(Family::OrbitLike, p2.sqrt(), rate, c));
    }
    // κ₀² = (2λ+4)p²/(2p² − 1)
    let p2 = kappa0_sq / (2.0 * kappa0_sq - b);
    let rate = 0.5 * (b / (2.0 * p2 - 1.0)).sqrt();
    Ok(mk(Family::WaveLike, p2.sqrt(), rate, c))
}

/// Wave-like elastica from its modulus `p ∈ (1/√2, 1)`.
pub fn wave_like(lambda: f64, p: f64) -> Result<ElasticaParams, ElasticaError> {
    if !(p > std::f64::consts::FRAC_1_SQRT_2 && p < 1.0) {
        return Err(ElasticaError::InvalidModulus(p));
    }
    let b = 2.0 * lambda + 4.0;
    let kappa0_sq = b * p * p / (2.0 * p * p - 1.0);
    Ok(ElasticaParams {
        lambda,
        kappa0_sq,
        first_integral: first_integral_at_peak(lambda, kappa0_sq),
        modulus: p,
        rate: 0.5 * (b / (2.0 * p * p - 1.0)).sqrt(),
        family: Family::WaveLike,
    })
}

/// Signed curvature `κ(s)` with `κ(0) = +κ₀`.
pub fn curvature_profile(params: &ElasticaParams, s: f64) -> f64 {
    let k0 = params.kappa0_sq.sqrt();
    let u = params.rate * s;
    let m = || EllipticModulus::new(params.modulus.clamp(0.0, 1.0)).expect("clamped modulus");
    match params.family {
        Family::Geodesic => 0.0,
        Family::Circular => k0,
        Family::OrbitLike => k0 * jacobi_dn(u, m()),
        Family::AsymptoticallyGeodesic => k0 / u.cosh(),
        Family::WaveLike => k0 * jacobi_cn(u, m()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let a = classify(0.0, 4.0).unwrap();
        assert_eq!(a.family, Family::AsymptoticallyGeodesic);
        assert_eq!(a.rate, 1.0);
        assert_eq!(a.first_integral, 0.0);
        assert_eq!(classify(0.0, 2.0).unwrap().family, Family::Circular);
        let o = classify(0.0, 3.0).unwrap();
        assert_eq!(o.family, Family::OrbitLike);
        assert!((o.modulus * o.modulus - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(classify(0.0, 0.0).unwrap().family, Family::Geodesic);
        assert!(matches!(classify(0.0, 1.0), Err(ElasticaError::NoElastica { .. })));
        assert!(classify(-2.0, 1.0).is_err());
    }

    #[test]
    fn profile_examples() {
        let a = classify(0.0, 4.0).unwrap();
        for &s in &[-3.0, 0.0, 0.4, 2.0] {
            assert!((curvature_profile(&a, s) - 2.0 / f64::cosh(s)).abs() < 1e-15);
        }
        let c = classify(0.0, 2.0).unwrap();
        assert_eq!(curvature_profile(&c, 1.7), 2f64.sqrt());
        let w = wave_like(0.0, 0.9).unwrap();
        let expect = (4.0 * 0.81 / 0.62f64).sqrt();
        assert!((curvature_profile(&w, 0.0) - expect).abs() < 1e-14);
        let back = classify(0.0, w.kappa0_sq).unwrap();
        assert_eq!(back.family, Family::WaveLike);
        assert!((back.modulus - 0.9).abs() < 1e-14);
    }
}
