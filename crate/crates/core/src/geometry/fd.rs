//! Fourth-order finite differences on a uniform parameter grid.
//!
//! Interior stencils are written as sums of symmetric pairs so that a mirror of the
//! grid index together with a sign flip of the data reproduces the result bit for bit.

use std::ops::{Add, Mul, Sub};

use super::Topology;

/// Values that the stencils can act on.
pub trait Lin: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}
impl<T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>> Lin for T {}

#[inline]
fn central_d1<T: Lin>(m2: T, m1: T, p1: T, p2: T, inv12h: f64) -> T {
    ((p1 - m1) * 8.0 - (p2 - m2)) * inv12h
}

#[inline]
fn central_d2<T: Lin>(m2: T, m1: T, c: T, p1: T, p2: T, inv12h2: f64) -> T {
    ((p1 + m1) * 16.0 - (p2 + m2) - c * 30.0) * inv12h2
}

/// First derivative with respect to the parameter, written into `out`.
pub fn d1_into<T: Lin>(f: &[T], h: f64, topo: Topology, out: &mut [T]) {
    let n = f.len();
    debug_assert_eq!(out.len(), n);
    let inv = 1.0 / (12.0 * h);
    match topo {
        Topology::Closed => {
            for i in 0..n {
                let m2 = f[(i + n - 2) % n];
                let m1 = f[(i + n - 1) % n];
                let p1 = f[(i + 1) % n];
                let p2 = f[(i + 2) % n];
                out[i] = central_d1(m2, m1, p1, p2, inv);
            }
        }
        Topology::Open => {
            for i in 2..n - 2 {
                out[i] = central_d1(f[i - 2], f[i - 1], f[i + 1], f[i + 2], inv);
            }
            out[0] = (f[0] * -25.0 + f[1] * 48.0 - f[2] * 36.0 + f[3] * 16.0 - f[4] * 3.0) * inv;
            out[1] = (f[0] * -3.0 - f[1] * 10.0 + f[2] * 18.0 - f[3] * 6.0 + f[4]) * inv;
            let k = n - 1;
            out[k] = (f[k] * 25.0 - f[k - 1] * 48.0 + f[k - 2] * 36.0 - f[k - 3] * 16.0 + f[k - 4] * 3.0) * inv;
            out[k - 1] = (f[k] * 3.0 + f[k - 1] * 10.0 - f[k - 2] * 18.0 + f[k - 3] * 6.0 - f[k - 4]) * inv;
        }
    }
}

/// Second derivative with respect to the parameter, written into `out`.
pub fn d2_into<T: Lin>(f: &[T], h: f64, topo: Topology, out: &mut [T]) {
    let n = f.len();
    debug_assert_eq!(out.len(), n);
    let inv = 1.0 / (12.0 * h * h);
    match topo {
        Topology::Closed => {
            for i in 0..n {
                let m2 = f[(i + n - 2) % n];
                let m1 = f[(i + n - 1) % n];
                let p1 = f[(i + 1) % n];
                let p2 = f[(i + 2) % n];
                out[i] = central_d2(m2, m1, f[i], p1, p2, inv);
            }
        }
        Topology::Open => {
            for i in 2..n - 2 {
                out[i] = central_d2(f[i - 2], f[i - 1], f[i], f[i + 1], f[i + 2], inv);
            }
            out[0] = (f[0] * 45.0 - f[1] * 154.0 + f[2] * 214.0 - f[3] * 156.0 + f[4] * 61.0
                - f[5] * 10.0)
                * inv;
            out[1] = (f[0] * 10.0 - f[1] * 15.0 - f[2] * 4.0 + f[3] * 14.0 - f[4] * 6.0 + f[5]) * inv;
            let k = n - 1;
            out[k] = (f[k] * 45.0 - f[k - 1] * 154.0 + f[k - 2] * 214.0 - f[k - 3] * 156.0
                + f[k - 4] * 61.0
                - f[k - 5] * 10.0)
                * inv;
            out[k - 1] = (f[k] * 10.0 - f[k - 1] * 15.0 - f[k - 2] * 4.0 + f[k - 3] * 14.0
                - f[k - 4] * 6.0
                + f[k - 5])
                * inv;
        }
    }
}

pub fn d1<T: Lin + Default>(f: &[T], h: f64, topo: Topology) -> Vec<T> {
    let mut out = vec![T::default(); f.len()];
    d1_into(f, h, topo, &mut out);
    out
}

pub fn d2<T: Lin + Default>(f: &[T], h: f64, topo: Topology) -> Vec<T> {
    let mut out = vec![T::default(); f.len()];
    d2_into(f, h, topo, &mut out);
    out
}

const D1_END: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const D1_NEXT: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
const D2_END: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
const D2_NEXT: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];

/// Add `Dᵀa` to `out`, where `D` is the (unscaled) stencil matrix with `rows` giving row `i`.
fn adjoint_add<T: Lin>(a: &[T], scale: f64, out: &mut [T], row: impl Fn(usize, &mut dyn FnMut(usize, f64))) {
    for (i, &ai) in a.iter().enumerate() {
        let ai = ai * scale;
        row(i, &mut |j, c| out[j] = out[j] + ai * c);
    }
}

/// `out += D₁ᵀa` for the first-derivative operator of [`d1_into`].
pub fn d1_adjoint_add<T: Lin>(a: &[T], h: f64, topo: Topology, out: &mut [T]) {
    let n = a.len();
    let row = |i: usize, emit: &mut dyn FnMut(usize, f64)| match topo {
        Topology::Closed => {
            emit((i + n - 2) % n, 1.0);
            emit((i + n - 1) % n, -8.0);
            emit((i + 1) % n, 8.0);
            emit((i + 2) % n, -1.0);
        }
        Topology::Open => {
            if i == 0 || i == 1 {
                let c = if i == 0 { &D1_END } else { &D1_NEXT };
                c.iter().enumerate().for_each(|(j, &v)| emit(j, v));
            } else if i + 2 >= n {
                let c = if i + 1 == n { &D1_END } else { &D1_NEXT };
                c.iter().enumerate().for_each(|(j, &v)| emit(n - 1 - j, -v));
            } else {
                emit(i - 2, 1.0);
                emit(i - 1, -8.0);
                emit(i + 1, 8.0);
                emit(i + 2, -1.0);
            }
        }
    };
    adjoint_add(a, 1.0 / (12.0 * h), out, row);
}

/// `out += D₂ᵀa` for the second-derivative operator of [`d2_into`].
pub fn d2_adjoint_add<T: Lin>(a: &[T], h: f64, topo: Topology, out: &mut [T]) {
    let n = a.len();
    let row = |i: usize, emit: &mut dyn FnMut(usize, f64)| match topo {
        Topology::Closed => {
            emit((i + n - 2) % n, -1.0);
            emit((i + n - 1) % n, 16.0);
            emit(i, -30.0);
            emit((i + 1) % n, 16.0);
            emit((i + 2) % n, -1.0);
        }
        Topology::Open => {
            if i == 0 || i == 1 {
                let c = if i == 0 { &D2_END } else { &D2_NEXT };
                c.iter().enumerate().for_each(|(j, &v)| emit(j, v));
            } else if i + 2 >= n {
                let c = if i + 1 == n { &D2_END } else { &D2_NEXT };
                c.iter().enumerate().for_each(|(j, &v)| emit(n - 1 - j, v));
            } else {
                emit(i - 2, -1.0);
                emit(i - 1, 16.0);
                emit(i, -30.0);
                emit(i + 1, 16.0);
                emit(i + 2, -1.0);
            }
        }
    };
    adjoint_add(a, 1.0 / (12.0 * h * h), out, row);
}

/// Trapezoid weights (in units of the grid step).
pub fn trapezoid_weight(i: usize, n: usize, topo: Topology) -> f64 {
    match topo {
        Topology::Closed => 1.0,
        Topology::Open => {
            if i == 0 || i + 1 == n {
                0.5
            } else {
                1.0
            }
        }
    }
}
