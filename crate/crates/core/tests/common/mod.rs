//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use hypelastic::geometry::{directed_polyline_distance, Vec2};
use num_complex::Complex64;

/// `(sn, cn, dn)` by classical RK4 on `sn' = cn·dn, cn' = −sn·dn, dn' = −p²·sn·cn`.
pub fn jacobi_rk4(u: f64, p: f64) -> (f64, f64, f64) {
    let steps = ((u.abs() / 1e-3).ceil() as usize).max(1);
    let h = u / steps as f64;
    let k2 = p * p;
    let f = |y: [f64; 3]| [y[1] * y[2], -y[0] * y[2], -k2 * y[0] * y[1]];
    let mut y = [0.0, 1.0, 1.0];
    for _ in 0..steps {
        let a = f(y);
        let b = f([y[0] + 0.5 * h * a[0], y[1] + 0.5 * h * a[1], y[2] + 0.5 * h * a[2]]);
        let c = f([y[0] + 0.5 * h * b[0], y[1] + 0.5 * h * b[1], y[2] + 0.5 * h * b[2]]);
        let d = f([y[0] + h * c[0], y[1] + h * c[1], y[2] + h * c[2]]);
        for i in 0..3 {
            y[i] += h / 6.0 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
        }
    }
    (y[0], y[1], y[2])
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Half-plane asymptotically geodesic elastica `(x, cosh x)/(x² + cosh²x)` for complex `x`.
pub fn elastica_complex(x: Complex64) -> (Complex64, Complex64) {
    let c = x.cosh();
    let d = x * x + c * c;
    (x / d, c / d)
}

/// Derivative of the half-plane elastica by the complex step.
pub fn elastica_derivative(x: f64) -> Vec2 {
    let eps = 1e-30;
    let (a, b) = elastica_complex(Complex64::new(x, eps));
    Vec2::new(a.im / eps, b.im / eps)
}

pub fn elastica(x: f64) -> Vec2 {
    let (a, b) = elastica_complex(Complex64::new(x, 0.0));
    Vec2::new(a.re, b.re)
}

/// Root of `g` on `[a, b]` by bisection to machine resolution.
pub fn bisect(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut ga = g(a);
    assert!(ga * g(b) <= 0.0, "no sign change on [{a}, {b}]");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let gm = g(m);
        if gm.signum() == ga.signum() {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Hausdorff distance from a closed polyline to the vertical segment `{0} × [y0, y1]`.
pub fn hausdorff_to_vertical_segment(nodes: &[Vec2], y0: f64, y1: f64) -> f64 {
    let seg: Vec<Vec2> = (0..=2000).map(|i| Vec2::new(0.0, y0 + (y1 - y0) * i as f64 / 2000.0)).collect();
    let mut closed = nodes.to_vec();
    closed.push(nodes[0]);
    directed_polyline_distance(&closed, &seg).max(directed_polyline_distance(&seg, &closed))
}

/// Smooth periodic vector field with a few seeded Fourier modes.
pub fn fourier_field(n: usize, coeffs: &[(f64, f64, f64, f64)]) -> Vec<Vec2> {
    (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            coeffs.iter().enumerate().fold(Vec2::ZERO, |acc, (k, &(a, b, c, d))| {
                let w = (k + 1) as f64 * t;
                acc + Vec2::new(a * w.cos() + b * w.sin(), c * w.cos() + d * w.sin())
            })
        })
        .collect()
}
