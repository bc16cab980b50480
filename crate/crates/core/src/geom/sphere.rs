//! Unit sphere: caps, the spherical potential and equipotential great circles.
//!
//! The potential of a point `A` with respect to a cap of center `O` and
//! angular radius `r` is `cos(AO) / cos r`, which for unit vectors is simply
//! `(A·O) / cos r`. It equals one on the cap boundary, exceeds one inside and
//! falls off monotonically with the distance from the center. Two caps are
//! therefore split by the plane `(O1/cos r1 - O2/cos r2)·u = 0`, a great circle.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::{GeomError, Vec3};

/// Caps must stay strictly smaller than a hemisphere by this margin.
pub const RADIUS_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SPoint(Vec3);

impl SPoint {
    /// Accepts vectors whose length is within `1e-12` of one.
    pub fn new(v: Vec3) -> Result<Self, GeomError> {
        let n = v.norm();
        if !v.is_finite() || (n - 1.0).abs() > 1e-12 {
            return Err(GeomError::NotUnit(n));
        }
        Ok(SPoint(v))
    }

    pub fn normalize(v: Vec3) -> Result<Self, GeomError> {
        let n = v.norm();
        if !(n > 1e-300) || !n.is_finite() {
            return Err(GeomError::NotUnit(n));
        }
        Ok(SPoint(v * (1.0 / n)))
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }

    pub fn antipode(self) -> SPoint {
        SPoint(-self.0)
    }

    pub fn dot(self, other: SPoint) -> f64 {
        self.0.dot(other.0)
    }
}

/// Central angle between two points of the sphere.
pub fn angular_distance(a: SPoint, b: SPoint) -> f64 {
    let (u, v) = (a.vec(), b.vec());
    u.cross(v).norm().atan2(u.dot(v))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SDisc {
    pub center: SPoint,
    pub radius: f64,
}

impl SDisc {
    pub fn new(center: SPoint, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0 && radius < FRAC_PI_2 - RADIUS_MARGIN) {
            return Err(GeomError::InvalidRadius(radius));
        }
        Ok(SDisc { center, radius })
    }

    pub fn clearance(&self, other: &SDisc) -> f64 {
        angular_distance(self.center, other.center) - self.radius - other.radius
    }
}

/// Closed hemisphere `{u : normal·u >= 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreatCircleS {
    pub normal: Vec3,
}

impl GreatCircleS {
    pub fn new(normal: Vec3) -> Result<Self, GeomError> {
        let n = normal.norm();
        if !(n > 1e-300) || !n.is_finite() {
            return Err(GeomError::ZeroNormal);
        }
        Ok(GreatCircleS {
            normal: normal * (1.0 / n),
        })
    }

    pub fn eval(&self, u: Vec3) -> f64 {
        self.normal.dot(u)
    }

    pub fn flipped(&self) -> GreatCircleS {
        GreatCircleS {
            normal: -self.normal,
        }
    }
}

/// Spherical potential `cos(AO) / cos r`.
pub fn spot(a: SPoint, c: &SDisc) -> f64 {
    a.dot(c.center) / c.radius.cos()
}

fn check_pair(c1: &SDisc, c2: &SDisc) -> Result<(), GeomError> {
    let (o1, o2) = (c1.center.vec(), c2.center.vec());
    if o1.cross(o2).norm() < 1e-12 {
        return Err(GeomError::DegeneratePair);
    }
    if c1.clearance(c2) <= 0.0 {
        return Err(GeomError::NotAPacking);
    }
    Ok(())
}

/// Equipotential great circle of two disjoint caps; `c1` lies in `normal·u >= 0`.
pub fn sbisector(c1: &SDisc, c2: &SDisc) -> Result<GreatCircleS, GeomError> {
    check_pair(c1, c2)?;
    let n = c1.center.vec() * (1.0 / c1.radius.cos()) - c2.center.vec() * (1.0 / c2.radius.cos());
    GreatCircleS::new(n)
}

/// The two equipotential points on the great circle through both centers.
///
/// The first point of the pair lies on the shorter arc between the centers and
/// separates the caps; the second one is its antipode.
pub fn equipotential_points(c1: &SDisc, c2: &SDisc) -> Result<(SPoint, SPoint), GeomError> {
    let bis = sbisector(c1, c2)?;
    let (o1, o2) = (c1.center.vec(), c2.center.vec());
    let through = o1.cross(o2);
    let p = SPoint::normalize(bis.normal.cross(through))?;
    let p = if p.vec().dot(o1 + o2) >= 0.0 { p } else { p.antipode() };
    Ok((p, p.antipode()))
}

/// Nearest point of the great circle to `a`.
pub fn sphere_foot_of_perpendicular(a: SPoint, g: &GreatCircleS) -> Result<SPoint, GeomError> {
    let h = a.vec().dot(g.normal);
    if h.abs() >= 1.0 - 1e-12 {
        return Err(GeomError::ProjectionUndefined);
    }
    SPoint::normalize(a.vec() - g.normal * h)
}
