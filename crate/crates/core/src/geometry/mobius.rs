//! Orientation-preserving isometries of the disk, `F(z) = e^{iθ}(z − c)/(c̄z − 1)`.

use num_complex::Complex64;

use super::{GeometryError, Vec2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusIsometry {
    pub theta: f64,
    c: Vec2,
}

#[inline]
fn to_c(p: Vec2) -> Complex64 {
    Complex64::new(p.x, p.y)
}

#[inline]
fn from_c(z: Complex64) -> Vec2 {
    Vec2::new(z.re, z.im)
}

impl MobiusIsometry {
    pub fn new(theta: f64, c: Vec2) -> Result<Self, GeometryError> {
        if !(c.is_finite() && c.norm_sq() < 1.0) {
            return Err(GeometryError::InvalidPoint { x: c.x, y: c.y, model: super::Model::Disk });
        }
        Ok(MobiusIsometry { theta, c })
    }

    /// Rotation about the origin, `z ↦ e^{iα} z`.
    pub fn rotation(alpha: f64) -> Self {
        MobiusIsometry { theta: alpha + std::f64::consts::PI, c: Vec2::ZERO }
    }

    pub fn c(&self) -> Vec2 {
        self.c
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        let z = to_c(p);
        let c = to_c(self.c);
        let rot = Complex64::from_polar(1.0, self.theta);
        from_c(rot * (z - c) / (c.conj() * z - 1.0))
    }

    /// Complex derivative `F'(z)`; the differential acts as multiplication by it.
    pub fn derivative(&self, p: Vec2) -> Complex64 {
        let z = to_c(p);
        let c = to_c(self.c);
        let rot = Complex64::from_polar(1.0, self.theta);
        let den = c.conj() * z - 1.0;
        rot * (c * c.conj() - 1.0) / (den * den)
    }

    /// Push a tangent vector at `p` forward.
    pub fn push_vector(&self, p: Vec2, v: Vec2) -> Vec2 {
        from_c(self.derivative(p) * to_c(v))
    }
}
