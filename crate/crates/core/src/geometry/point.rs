//! Points of the two hyperbolic models and the maps between them.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use super::GeometryError;

/// Floor on `1 − |p|²` below which disk metric factors are refused.
pub const BOUNDARY_FLOOR: f64 = 1e-14;

/// Plain 2-vector in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the planar cross product.
    #[inline]
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Rotation by +90°.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Mirror in the vertical axis, `diag(−1, 1)`.
    #[inline]
    pub fn mirror_x(self) -> Vec2 {
        Vec2::new(-self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Which conformal model a chart point lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Disk,
    HalfPlane,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Disk => "disk",
            Model::HalfPlane => "half-plane",
        }
    }

    pub fn parse(s: &str) -> Option<Model> {
        match s {
            "disk" => Some(Model::Disk),
            "half-plane" => Some(Model::HalfPlane),
            _ => None,
        }
    }

    /// Whether `p` is an interior point of the model.
    pub fn contains(self, p: Vec2) -> bool {
        match self {
            Model::Disk => 1.0 - p.norm_sq() > 0.0,
            Model::HalfPlane => p.y > 0.0,
        }
    }

    /// Gradient of the log conformal factor `φ`, where `g = e^{2φ}⟨·,·⟩`.
    #[inline]
    pub fn log_factor_grad(self, p: Vec2) -> Vec2 {
        match self {
            Model::Disk => p * (2.0 / (1.0 - p.norm_sq())),
            Model::HalfPlane => Vec2::new(0.0, -1.0 / p.y),
        }
    }

    /// Hessian of `φ`.
    #[inline]
    pub fn log_factor_hessian(self, p: Vec2) -> [[f64; 2]; 2] {
        match self {
            Model::Disk => {
                let gap = 1.0 - p.norm_sq();
                let a = 2.0 / gap;
                let b = 4.0 / (gap * gap);
                [[a + b * p.x * p.x, b * p.x * p.y], [b * p.x * p.y, a + b * p.y * p.y]]
            }
            Model::HalfPlane => [[0.0, 0.0], [0.0, 1.0 / (p.y * p.y)]],
        }
    }

    /// Conformal factor without the boundary guard; callers have already validated `p`.
    #[inline]
    pub fn factor_unchecked(self, p: Vec2) -> f64 {
        match self {
            Model::Disk => 2.0 / (1.0 - p.norm_sq()),
            Model::HalfPlane => 1.0 / p.y,
        }
    }

    /// Christoffel symbols `Γᵏᵢⱼ` indexed `[k][i][j]`.
    pub fn christoffel(self, p: Vec2) -> [[[f64; 2]; 2]; 2] {
        let g = self.log_factor_grad(p);
        let d = [g.x, g.y];
        let mut out = [[[0.0; 2]; 2]; 2];
        for (k, row) in out.iter_mut().enumerate() {
            for (i, col) in row.iter_mut().enumerate() {
                for (j, v) in col.iter_mut().enumerate() {
                    let dik = if i == k { 1.0 } else { 0.0 };
                    let djk = if j == k { 1.0 } else { 0.0 };
                    let dij = if i == j { 1.0 } else { 0.0 };
                    *v = dik * d[j] + djk * d[i] - dij * d[k];
                }
            }
        }
        out
    }
}

/// Conformal speed factor `f` with `|v|_g = f·|v|`.
pub fn metric_factor(p: Vec2, model: Model) -> Result<f64, GeometryError> {
    match model {
        Model::Disk => {
            let gap = 1.0 - p.norm_sq();
            if !(gap >= BOUNDARY_FLOOR) {
                return Err(GeometryError::Boundary { x: p.x, y: p.y });
            }
            Ok(2.0 / gap)
        }
        Model::HalfPlane => {
            if !(p.y > 0.0) {
                return Err(GeometryError::Boundary { x: p.x, y: p.y });
            }
            Ok(1.0 / p.y)
        }
    }
}

/// Interior point of the Poincaré disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Vec2);

impl DiskPoint {
    pub fn new(p1: f64, p2: f64) -> Result<Self, GeometryError> {
        let v = Vec2::new(p1, p2);
        if v.is_finite() && v.norm_sq() < 1.0 {
            Ok(DiskPoint(v))
        } else {
            Err(GeometryError::InvalidPoint { x: p1, y: p2, model: Model::Disk })
        }
    }
    pub fn vec(self) -> Vec2 {
        self.0
    }
}

/// Point of the closed disk; allowed on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureDiskPoint(Vec2);

impl ClosureDiskPoint {
    pub fn new(p1: f64, p2: f64) -> Result<Self, GeometryError> {
        let v = Vec2::new(p1, p2);
        if v.is_finite() && v.norm_sq() <= 1.0 + 1e-15 {
            Ok(ClosureDiskPoint(v))
        } else {
            Err(GeometryError::InvalidPoint { x: p1, y: p2, model: Model::Disk })
        }
    }
    pub fn vec(self) -> Vec2 {
        self.0
    }
    pub fn is_interior(self) -> bool {
        self.0.norm_sq() < 1.0
    }
}

impl From<DiskPoint> for ClosureDiskPoint {
    fn from(p: DiskPoint) -> Self {
        ClosureDiskPoint(p.0)
    }
}

/// Interior point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint(Vec2);

impl HalfPlanePoint {
    pub fn new(u1: f64, u2: f64) -> Result<Self, GeometryError> {
        let v = Vec2::new(u1, u2);
        if v.is_finite() && u2 > 0.0 {
            Ok(HalfPlanePoint(v))
        } else {
            Err(GeometryError::InvalidPoint { x: u1, y: u2, model: Model::HalfPlane })
        }
    }
    pub fn vec(self) -> Vec2 {
        self.0
    }
}

/// Point of the closed half-plane (`u2 ≥ 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureHalfPlanePoint(Vec2);

impl ClosureHalfPlanePoint {
    pub fn vec(self) -> Vec2 {
        self.0
    }
}

/// `Φ`: disk to half-plane on raw coordinates.
#[inline]
pub fn phi(p: Vec2) -> Vec2 {
    let den = p.x * p.x + (p.y - 1.0) * (p.y - 1.0);
    Vec2::new(2.0 * p.x / den, (1.0 - p.x * p.x - p.y * p.y) / den)
}

/// `Φ⁻¹`: half-plane to disk on raw coordinates.
#[inline]
pub fn phi_inv(u: Vec2) -> Vec2 {
    let den = u.x * u.x + (u.y + 1.0) * (u.y + 1.0);
    Vec2::new(2.0 * u.x / den, (u.x * u.x + u.y * u.y - 1.0) / den)
}

/// Jacobian of `Φ` at `p`, row-major.
pub fn phi_jacobian(p: Vec2) -> [[f64; 2]; 2] {
    let a = p.y - 1.0;
    let den = p.x * p.x + a * a;
    let s = 2.0 / (den * den);
    let diag = a * a - p.x * p.x;
    let off = 2.0 * p.x * a;
    [[s * diag, -s * off], [s * off, s * diag]]
}

pub fn disk_to_half(p: DiskPoint) -> HalfPlanePoint {
    HalfPlanePoint(phi(p.0))
}

/// Closure variant; the pole `(0,1)` is rejected.
pub fn disk_to_half_closure(p: ClosureDiskPoint) -> Result<ClosureHalfPlanePoint, GeometryError> {
    let v = p.0;
    if v.x * v.x + (v.y - 1.0) * (v.y - 1.0) < 1e-28 {
        return Err(GeometryError::Pole);
    }
    let u = phi(v);
    Ok(ClosureHalfPlanePoint(Vec2::new(u.x, u.y.max(0.0))))
}

pub fn half_to_disk(u: HalfPlanePoint) -> DiskPoint {
    DiskPoint(phi_inv(u.0))
}

pub fn half_to_disk_closure(u: ClosureHalfPlanePoint) -> ClosureDiskPoint {
    ClosureDiskPoint(phi_inv(u.0))
}

/// Closure half-plane point from raw coordinates.
pub fn closure_half_point(u1: f64, u2: f64) -> Result<ClosureHalfPlanePoint, GeometryError> {
    if u1.is_finite() && u2.is_finite() && u2 >= 0.0 {
        Ok(ClosureHalfPlanePoint(Vec2::new(u1, u2)))
    } else {
        Err(GeometryError::InvalidPoint { x: u1, y: u2, model: Model::HalfPlane })
    }
}
