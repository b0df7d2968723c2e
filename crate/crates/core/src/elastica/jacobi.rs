//! Jacobi elliptic functions and complete integrals by AGM descent.

use std::f64::consts::FRAC_PI_2;

/// Jacobi modulus `p ∈ [0, 1]` (parameter `m = p²`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(p: f64) -> Option<Self> {
        (0.0..=1.0).contains(&p).then_some(EllipticModulus(p))
    }
    pub fn p(self) -> f64 {
        self.0
    }
}

const AGM_TOL: f64 = 1e-14;
const MAX_LEVELS: usize = 64;

/// `(sn, cn, dn)` at `u` for modulus `p`.
pub fn jacobi_sncndn(u: f64, p: EllipticModulus) -> (f64, f64, f64) {
    let k = p.0;
    if k == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    if k == 1.0 {
        let s = 1.0 / u.cosh();
        return (u.tanh(), s, s);
    }
    let m = k * k;
    let mut a = [0.0; MAX_LEVELS];
    let mut c = [0.0; MAX_LEVELS];
    a[0] = 1.0;
    let mut b = (1.0 - m).sqrt();
    c[0] = k;
    let mut n = 0;
    while c[n].abs() > AGM_TOL && n + 1 < MAX_LEVELS {
        let an = a[n];
        a[n + 1] = 0.5 * (an + b);
        c[n + 1] = 0.5 * (an - b);
        b = (an * b).sqrt();
        n += 1;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn² = cn² + (1 − p²)sn² avoids the 0/0 of the amplitude-ratio form near u = K
    let dn = (cn * cn + (1.0 - k) * (1.0 + k) * sn * sn).sqrt();
    (sn, cn, dn)
}

pub fn jacobi_dn(u: f64, p: EllipticModulus) -> f64 {
    jacobi_sncndn(u, p).2
}

pub fn jacobi_cn(u: f64, p: EllipticModulus) -> f64 {
    jacobi_sncndn(u, p).1
}

pub fn jacobi_sn(u: f64, p: EllipticModulus) -> f64 {
    jacobi_sncndn(u, p).0
}

/// Complete integrals `(K(p), E(p))`; `K(1) = ∞`, `E(1) = 1`.
pub fn complete_integrals(p: EllipticModulus) -> (f64, f64) {
    let k = p.0;
    if k == 1.0 {
        return (f64::INFINITY, 1.0);
    }
    let mut a: f64 = 1.0;
    let mut b = (1.0 - k * k).sqrt();
    let mut c = k;
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    while c.abs() > AGM_TOL {
        let an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    let kk = FRAC_PI_2 / a;
    (kk, kk * (1.0 - sum))
}
