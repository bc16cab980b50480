//! Hyperbolic plane in the hyperboloid model.
//!
//! Points live on the upper sheet `x1² + x2² - x0² = -1` with the Minkowski
//! form `<X,Y> = x1y1 + x2y2 - x0y0`, so that `cosh d(A,B) = -<A,B>`.
//! A `Vec3` stores `(x0, x1, x2)` in its `(x, y, z)` fields. Geodesics are
//! cut out by planes through the origin; the equipotential set of two discs
//! is one of them. The Poincaré disc is only used at the I/O boundary, the
//! Klein disc for polygon clipping (its geodesics are chords).

use serde::{Deserialize, Serialize};

use super::{EPoint, GeomError, OrientedLineE, Vec3};

/// Minkowski bilinear form.
pub fn mdot(a: Vec3, b: Vec3) -> f64 {
    a.y * b.y + a.z * b.z - a.x * b.x
}

/// Vector orthogonal to both arguments under the Minkowski form.
pub fn mcross(a: Vec3, b: Vec3) -> Vec3 {
    let c = a.cross(b);
    Vec3::new(-c.x, c.y, c.z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HPoint(Vec3);

impl HPoint {
    pub const ORIGIN: HPoint = HPoint(Vec3::new(1.0, 0.0, 0.0));

    /// Accepts vectors on the upper sheet within `1e-9` (relative to `x0²`).
    pub fn new(v: Vec3) -> Result<Self, GeomError> {
        let q = mdot(v, v);
        if !v.is_finite() || v.x < 1.0 - 1e-12 || (q + 1.0).abs() > 1e-9 * v.x.max(1.0).powi(2) {
            return Err(GeomError::NotOnHyperboloid(q));
        }
        Ok(HPoint(v))
    }

    /// Rescales a future-pointing timelike vector onto the sheet.
    pub fn normalize(v: Vec3) -> Result<Self, GeomError> {
        let q = mdot(v, v);
        if !(q < 0.0) || !(v.x > 0.0) || !v.is_finite() {
            return Err(GeomError::NotOnHyperboloid(q));
        }
        Ok(HPoint(v * (1.0 / (-q).sqrt())))
    }

    /// Point at distance `dist` from the origin in direction `angle`.
    pub fn from_polar(dist: f64, angle: f64) -> HPoint {
        let (s, c) = angle.sin_cos();
        let sh = dist.sinh();
        HPoint(Vec3::new(dist.cosh(), sh * c, sh * s))
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }

    pub fn klein(self) -> EPoint {
        EPoint::new(self.0.y / self.0.x, self.0.z / self.0.x)
    }

    pub fn from_klein(k: EPoint) -> Result<HPoint, GeomError> {
        let q = 1.0 - k.norm2();
        if !(q > 0.0) {
            return Err(GeomError::OutsideModel(k.norm()));
        }
        let s = 1.0 / q.sqrt();
        Ok(HPoint(Vec3::new(s, k.x * s, k.y * s)))
    }

    /// Orthonormal basis of the tangent plane at this point.
    pub fn tangent_basis(self) -> (Vec3, Vec3) {
        let o = self.0;
        let proj = |v: Vec3| v + o * mdot(v, o);
        let e1 = proj(Vec3::new(0.0, 1.0, 0.0));
        let e1 = e1 * (1.0 / mdot(e1, e1).sqrt());
        let w = proj(Vec3::new(0.0, 0.0, 1.0));
        let w = w - e1 * mdot(w, e1);
        let e2 = w * (1.0 / mdot(w, w).sqrt());
        (e1, e2)
    }

    /// Point at distance `dist` in direction `angle` measured in `tangent_basis`.
    pub fn offset(self, dist: f64, angle: f64) -> HPoint {
        let (e1, e2) = self.tangent_basis();
        let (s, c) = angle.sin_cos();
        HPoint(self.0 * dist.cosh() + (e1 * c + e2 * s) * dist.sinh())
    }
}

pub fn hdist(a: HPoint, b: HPoint) -> f64 {
    (-mdot(a.vec(), b.vec())).max(1.0).acosh()
}

/// Point at fraction `t` of the geodesic segment from `a` to `b`.
pub fn geodesic_lerp(a: HPoint, b: HPoint, t: f64) -> HPoint {
    let d = hdist(a, b);
    if d < 1e-12 {
        return a;
    }
    let s = d.sinh();
    let v = a.vec() * (((1.0 - t) * d).sinh() / s) + b.vec() * ((t * d).sinh() / s);
    HPoint::normalize(v).unwrap_or(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HDisc {
    pub center: HPoint,
    pub radius: f64,
}

impl HDisc {
    pub fn new(center: HPoint, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeomError::InvalidRadius(radius));
        }
        Ok(HDisc { center, radius })
    }

    pub fn clearance(&self, other: &HDisc) -> f64 {
        hdist(self.center, other.center) - self.radius - other.radius
    }

    /// Boundary point at parameter `t` in `[0, 2π)`.
    pub fn boundary_point(&self, t: f64) -> HPoint {
        self.center.offset(self.radius, t)
    }
}

/// Half-plane `{X : <X,normal> <= 0}` with a unit spacelike normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicH {
    pub normal: Vec3,
}

impl GeodesicH {
    pub fn new(normal: Vec3) -> Result<Self, GeomError> {
        let q = mdot(normal, normal);
        if !(q > 1e-300) || !normal.is_finite() {
            return Err(GeomError::DegeneratePair);
        }
        Ok(GeodesicH {
            normal: normal * (1.0 / q.sqrt()),
        })
    }

    pub fn eval(&self, x: Vec3) -> f64 {
        mdot(x, self.normal)
    }

    pub fn flipped(&self) -> GeodesicH {
        GeodesicH {
            normal: -self.normal,
        }
    }

    /// The same half-plane in Klein coordinates.
    pub fn klein_line(&self) -> OrientedLineE {
        let n = self.normal;
        // <X,n> <= 0 with X = x0 (1, k): n1 k1 + n2 k2 <= n0
        OrientedLineE::new(EPoint::new(n.y, n.z), n.x)
            .expect("spacelike normal has a nonzero spatial part")
    }

    /// Arc-length parametrization of the boundary geodesic, `s = 0` being
    /// the point closest to the model origin.
    pub fn point_at(&self, s: f64) -> HPoint {
        let n = self.normal;
        let foot = Vec3::new(1.0, 0.0, 0.0) + n * n.x;
        let foot = foot * (1.0 / (1.0 + n.x * n.x).sqrt());
        let dir = mcross(foot, n);
        let dir = dir * (1.0 / mdot(dir, dir).sqrt());
        HPoint(foot * s.cosh() + dir * s.sinh())
    }
}

/// Hyperbolic potential `cosh(AO) / cosh r`.
pub fn hpot(a: HPoint, c: &HDisc) -> f64 {
    -mdot(a.vec(), c.center.vec()) / c.radius.cosh()
}

/// Equipotential geodesic of two disjoint discs; `c1` lies in `<X,n> <= 0`.
pub fn hbisector(c1: &HDisc, c2: &HDisc) -> Result<GeodesicH, GeomError> {
    if hdist(c1.center, c2.center) < 1e-12 {
        return Err(GeomError::DegeneratePair);
    }
    if c1.clearance(c2) <= 0.0 {
        return Err(GeomError::NotAPacking);
    }
    let v = c2.center.vec() * (1.0 / c2.radius.cosh()) - c1.center.vec() * (1.0 / c1.radius.cosh());
    debug_assert!(mdot(v, v) > 0.0, "bisector normal of disjoint discs is spacelike");
    GeodesicH::new(v)
}

pub fn poincare_to_hyperboloid(p: EPoint) -> Result<HPoint, GeomError> {
    let q = p.norm2();
    if !p.is_finite() || q >= (1.0 - 1e-12) * (1.0 - 1e-12) {
        return Err(GeomError::OutsideModel(q.sqrt()));
    }
    let s = 1.0 / (1.0 - q);
    Ok(HPoint(Vec3::new((1.0 + q) * s, 2.0 * p.x * s, 2.0 * p.y * s)))
}

pub fn hyperboloid_to_poincare(x: HPoint) -> EPoint {
    let v = x.vec();
    EPoint::new(v.y / (1.0 + v.x), v.z / (1.0 + v.x))
}

/// Klein to Poincaré; boundary points map to themselves.
pub fn klein_to_poincare(k: EPoint) -> EPoint {
    let q = (1.0 - k.norm2()).max(0.0);
    k * (1.0 / (1.0 + q.sqrt()))
}

pub fn poincare_to_klein(p: EPoint) -> EPoint {
    p * (2.0 / (1.0 + p.norm2()))
}

/// Distance from the Poincaré-disc formula, used to cross-check `hdist`.
pub fn poincare_distance(p: EPoint, q: EPoint) -> f64 {
    let num = 2.0 * (p - q).norm2();
    let den = (1.0 - p.norm2()) * (1.0 - q.norm2());
    (1.0 + num / den).acosh()
}
