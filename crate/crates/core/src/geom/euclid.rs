//! Euclidean plane: points, discs, power of a point and radical lines.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::GeomError;

/// Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct EPoint {
    pub x: f64,
    pub y: f64,
}

impl EPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        EPoint { x, y }
    }

    pub fn dot(self, o: EPoint) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: EPoint) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: EPoint) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> EPoint {
        EPoint::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: f64) -> EPoint {
        let (s, c) = angle.sin_cos();
        EPoint::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn from_angle(angle: f64) -> EPoint {
        let (s, c) = angle.sin_cos();
        EPoint::new(c, s)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> EPoint {
        self * (1.0 / self.norm())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: EPoint, t: f64) -> EPoint {
        self + (o - self) * t
    }
}

impl From<[f64; 2]> for EPoint {
    fn from(a: [f64; 2]) -> Self {
        EPoint::new(a[0], a[1])
    }
}

impl From<EPoint> for [f64; 2] {
    fn from(p: EPoint) -> Self {
        [p.x, p.y]
    }
}

impl Add for EPoint {
    type Output = EPoint;
    fn add(self, o: EPoint) -> EPoint {
        EPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for EPoint {
    type Output = EPoint;
    fn sub(self, o: EPoint) -> EPoint {
        EPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for EPoint {
    type Output = EPoint;
    fn mul(self, s: f64) -> EPoint {
        EPoint::new(self.x * s, self.y * s)
    }
}

impl Neg for EPoint {
    type Output = EPoint;
    fn neg(self) -> EPoint {
        EPoint::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EDisc {
    pub center: EPoint,
    pub radius: f64,
}

impl EDisc {
    pub fn new(center: EPoint, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(GeomError::InvalidRadius(radius));
        }
        Ok(EDisc { center, radius })
    }

    /// Distance between the boundaries; negative when the discs overlap.
    pub fn clearance(&self, other: &EDisc) -> f64 {
        self.center.dist(other.center) - self.radius - other.radius
    }
}

/// Closed half-plane `{x : normal·x <= offset}` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedLineE {
    pub normal: EPoint,
    pub offset: f64,
}

impl OrientedLineE {
    /// Builds the half-plane from any nonzero normal, rescaling to unit length.
    pub fn new(normal: EPoint, offset: f64) -> Result<Self, GeomError> {
        let len = normal.norm();
        if !(len > 0.0) || !len.is_finite() {
            return Err(GeomError::ZeroNormal);
        }
        Ok(OrientedLineE {
            normal: normal * (1.0 / len),
            offset: offset / len,
        })
    }

    /// Signed distance; positive outside the half-plane.
    pub fn eval(&self, p: EPoint) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn contains(&self, p: EPoint, tol: f64) -> bool {
        self.eval(p) <= tol
    }

    pub fn flipped(&self) -> OrientedLineE {
        OrientedLineE {
            normal: -self.normal,
            offset: -self.offset,
        }
    }

    /// Intersection point of the two boundary lines, if they are not parallel.
    pub fn intersect(&self, other: &OrientedLineE) -> Option<EPoint> {
        let det = self.normal.cross(other.normal);
        if det.abs() < 1e-15 {
            return None;
        }
        let x = (self.offset * other.normal.y - other.offset * self.normal.y) / det;
        let y = (self.normal.x * other.offset - other.normal.x * self.offset) / det;
        Some(EPoint::new(x, y))
    }
}

/// Power of `a` with respect to the circle bounding `c`.
pub fn power(a: EPoint, c: &EDisc) -> f64 {
    (a - c.center).norm2() - c.radius * c.radius
}

/// The locus of equal power, oriented so that `c1` lies on the `<=` side.
pub fn radical_line(c1: &EDisc, c2: &EDisc) -> Result<OrientedLineE, GeomError> {
    let diff = c2.center - c1.center;
    if diff.norm() <= 1e-15 * (1.0 + c1.center.norm()) {
        return Err(GeomError::ConcentricPair);
    }
    if c1.clearance(c2) <= 0.0 {
        return Err(GeomError::NotAPacking);
    }
    // power(x,C1) <= power(x,C2)  <=>  2(O2-O1)·x <= |O2|²-|O1|²+r1²-r2²
    let rhs = c2.center.norm2() - c1.center.norm2() + c1.radius * c1.radius
        - c2.radius * c2.radius;
    OrientedLineE::new(diff * 2.0, rhs)
}
