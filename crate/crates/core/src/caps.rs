//! Caps of convex polygons: pairs of tangent segments from an exterior apex.
//!
//! A cap is determined by the outward normals of its two supporting lines.
//! With the disc inside both half-planes `u_i·x <= h_i`, the apex is the
//! intersection of the lines and the cap angle is `π` minus the angle between
//! the normals.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::geom::{EPoint, OrientedLineE};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CapError {
    #[error("polygon needs at least 3 non-collinear vertices")]
    TooFewVertices,
    #[error("polygon is not strictly convex at vertex {0}")]
    NotConvex(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("parallel normals")]
    ParallelNormals,
    #[error("degenerate cap")]
    Degenerate,
    #[error("cap angle {0} outside (0, π)")]
    AngleOutOfRange(f64),
    #[error("search failed")]
    SearchFailed,
}

/// Strictly convex polygon, counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexDisc {
    vertices: Vec<EPoint>,
    #[serde(skip)]
    normals: Vec<f64>,
    #[serde(skip)]
    diameter: f64,
}

impl ConvexDisc {
    /// Orients the loop counterclockwise and drops repeated and collinear
    /// vertices before checking strict convexity.
    pub fn new(vertices: Vec<EPoint>) -> Result<Self, CapError> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(CapError::NonFinite);
        }
        let (lo, hi) = vertices.iter().fold(
            (EPoint::new(f64::MAX, f64::MAX), EPoint::new(f64::MIN, f64::MIN)),
            |(lo, hi), p| (EPoint::new(lo.x.min(p.x), lo.y.min(p.y)), EPoint::new(hi.x.max(p.x), hi.y.max(p.y))),
        );
        let scale = lo.dist(hi);
        if !(scale > 0.0) {
            return Err(CapError::TooFewVertices);
        }
        let mut v = vertices;
        v.dedup_by(|a, b| a.dist(*b) <= 1e-12 * scale);
        while v.len() > 1 && v[0].dist(v[v.len() - 1]) <= 1e-12 * scale {
            v.pop();
        }
        if signed_area(&v) < 0.0 {
            v.reverse();
        }
        loop {
            let n = v.len();
            if n < 3 {
                return Err(CapError::TooFewVertices);
            }
            let flat = (0..n).find(|&k| {
                let (a, b, c) = (v[(k + n - 1) % n], v[k], v[(k + 1) % n]);
                (b - a).cross(c - b).abs() <= 1e-12 * scale * scale
            });
            match flat {
                Some(k) => {
                    v.remove(k);
                }
                None => break,
            }
        }
        let n = v.len();
        for k in 0..n {
            let (a, b, c) = (v[(k + n - 1) % n], v[k], v[(k + 1) % n]);
            if (b - a).cross(c - b) <= 0.0 {
                return Err(CapError::NotConvex(k));
            }
        }
        // the turning of a convex loop must be exactly one revolution
        let turn: f64 = (0..n)
            .map(|k| {
                let (a, b, c) = (v[(k + n - 1) % n], v[k], v[(k + 1) % n]);
                let (e0, e1) = (b - a, c - b);
                e0.cross(e1).atan2(e0.dot(e1))
            })
            .sum();
        if (turn - TAU).abs() > 1e-6 {
            return Err(CapError::NotConvex(0));
        }
        Ok(Self::from_ccw(v))
    }

    fn from_ccw(vertices: Vec<EPoint>) -> Self {
        let n = vertices.len();
        let first = edge_normal(vertices[0], vertices[1]);
        let mut normals = Vec::with_capacity(n);
        let mut acc = first;
        normals.push(acc);
        for k in 1..n {
            let a = edge_normal(vertices[k], vertices[(k + 1) % n]);
            let mut step = (a - acc).rem_euclid(TAU);
            if step >= TAU - 1e-15 {
                step = 0.0;
            }
            acc += step;
            normals.push(acc);
        }
        let diameter = hull_diameter(&vertices);
        ConvexDisc { vertices, normals, diameter }
    }

    /// Regular polygon with `m` vertices on the circle of radius `radius` about the origin.
    pub fn regular(m: usize, radius: f64) -> Self {
        let v = (0..m)
            .map(|k| EPoint::from_angle(TAU * k as f64 / m as f64) * radius)
            .collect();
        Self::from_ccw(v)
    }

    pub fn vertices(&self) -> &[EPoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn centroid(&self) -> EPoint {
        let s = self.vertices.iter().fold(EPoint::default(), |s, &p| s + p);
        s * (1.0 / self.vertices.len() as f64)
    }

    /// Outward normal angle of edge `k` (from vertex `k` to `k+1`), unwrapped
    /// so the sequence increases by less than `2π` in total.
    pub fn edge_normal_angle(&self, k: usize) -> f64 {
        self.normals[k]
    }

    /// Image under `x ↦ scale·Rot(rotation)·x + translation`.
    pub fn transformed(&self, scale: f64, rotation: f64, translation: EPoint) -> ConvexDisc {
        let v = self
            .vertices
            .iter()
            .map(|&p| p.rotate(rotation) * scale + translation)
            .collect();
        Self::from_ccw(v)
    }

    /// Support value and contact set for the outward normal at `angle`.
    fn support(&self, angle: f64) -> (f64, Contact) {
        let n = self.vertices.len();
        let t = (angle - self.normals[0]).rem_euclid(TAU);
        let k = self.normals.partition_point(|&a| a - self.normals[0] < t);
        let near = |j: usize| {
            let a = self.normals[j % n] - self.normals[0] + if j >= n { TAU } else { 0.0 };
            (a - t).abs() <= 1e-12 || (j.is_multiple_of(n) && (TAU - t) <= 1e-12)
        };
        let contact = if k > 0 && near(k - 1) {
            Contact::Edge(k - 1)
        } else if k < n && near(k) {
            Contact::Edge(k)
        } else if k == n && near(n) {
            Contact::Edge(0)
        } else {
            Contact::Vertex(k % n)
        };
        let u = EPoint::from_angle(angle);
        let p = match contact {
            Contact::Vertex(i) | Contact::Edge(i) => self.vertices[i],
        };
        (u.dot(p), contact)
    }

    pub fn contains(&self, p: EPoint, tol: f64) -> bool {
        let n = self.vertices.len();
        (0..n).all(|k| {
            let (a, b) = (self.vertices[k], self.vertices[(k + 1) % n]);
            (b - a).cross(p - a) >= -tol * (b - a).norm()
        })
    }
}

impl<'de> Deserialize<'de> for ConvexDisc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<EPoint>,
        }
        let raw = Raw::deserialize(d)?;
        ConvexDisc::new(raw.vertices).map_err(serde::de::Error::custom)
    }
}

/// Largest vertex distance of a convex loop, by rotating antipodal pairs.
fn hull_diameter(v: &[EPoint]) -> f64 {
    let n = v.len();
    let mut best = 0.0f64;
    let mut j = 1;
    for i in 0..n {
        let e = v[(i + 1) % n] - v[i];
        while e.cross(v[(j + 1) % n] - v[j]) > 0.0 {
            j = (j + 1) % n;
        }
        best = best.max(v[i].dist(v[j])).max(v[(i + 1) % n].dist(v[j]));
    }
    best
}

fn signed_area(v: &[EPoint]) -> f64 {
    let n = v.len();
    (0..n).map(|k| v[k].cross(v[(k + 1) % n])).sum::<f64>() * 0.5
}

fn edge_normal(a: EPoint, b: EPoint) -> f64 {
    let e = b - a;
    EPoint::new(e.y, -e.x).angle()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Contact {
    Vertex(usize),
    Edge(usize),
}

/// Points where a supporting line touches the disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContactSet {
    Vertex(EPoint),
    Edge(EPoint, EPoint),
}

impl ContactSet {
    /// Point of the contact set nearest to `p`, for `p` on the supporting line.
    pub fn nearest_to(&self, p: EPoint) -> EPoint {
        match *self {
            ContactSet::Vertex(v) => v,
            ContactSet::Edge(a, b) => {
                if a.dist(p) <= b.dist(p) {
                    a
                } else {
                    b
                }
            }
        }
    }
}

/// Supporting line with the given outward normal angle.
pub fn support_line(disc: &ConvexDisc, outward_normal_angle: f64) -> (OrientedLineE, ContactSet) {
    let (h, contact) = disc.support(outward_normal_angle);
    let line = OrientedLineE::new(EPoint::from_angle(outward_normal_angle), h).expect("unit normal");
    let set = match contact {
        Contact::Vertex(i) => ContactSet::Vertex(disc.vertices[i]),
        Contact::Edge(i) => ContactSet::Edge(disc.vertices[i], disc.vertices[(i + 1) % disc.len()]),
    };
    (line, set)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap {
    pub apex: EPoint,
    pub contact1: EPoint,
    pub contact2: EPoint,
    pub side1: f64,
    pub side2: f64,
    /// Apex angle, in `(0, π)`.
    pub angle: f64,
    /// Outward normal angles of the two supporting lines.
    pub normal1: f64,
    pub normal2: f64,
}

impl Cap {
    pub fn relative_difference(&self) -> f64 {
        (self.side1 - self.side2).abs() / (self.side1 + self.side2)
    }

    /// Same cap with the two sides exchanged.
    pub fn swapped(&self) -> Cap {
        Cap {
            contact1: self.contact2,
            contact2: self.contact1,
            side1: self.side2,
            side2: self.side1,
            normal1: self.normal2,
            normal2: self.normal1,
            ..*self
        }
    }

    /// Angle at the apex recomputed from the two rays.
    pub fn ray_angle(&self) -> f64 {
        let (a, b) = (self.contact1 - self.apex, self.contact2 - self.apex);
        a.cross(b).abs().atan2(a.dot(b))
    }
}

/// Cap cut out by the supporting lines with outward normals `θ1` and `θ2`.
pub fn cap_from_normals(disc: &ConvexDisc, theta1: f64, theta2: f64) -> Result<Cap, CapError> {
    let (l1, c1) = support_line(disc, theta1);
    let (l2, c2) = support_line(disc, theta2);
    let (u1, u2) = (l1.normal, l2.normal);
    if u1.cross(u2).abs() <= 1e-9 {
        return Err(CapError::ParallelNormals);
    }
    let apex = l1.intersect(&l2).ok_or(CapError::ParallelNormals)?;
    let (p, q) = (c1.nearest_to(apex), c2.nearest_to(apex));
    let (side1, side2) = (p.dist(apex), q.dist(apex));
    let scale = disc.diameter();
    if side1 <= 1e-12 * scale || side2 <= 1e-12 * scale {
        return Err(CapError::Degenerate);
    }
    let delta = u1.cross(u2).abs().atan2(u1.dot(u2));
    Ok(Cap {
        apex,
        contact1: p,
        contact2: q,
        side1,
        side2,
        angle: PI - delta,
        normal1: theta1,
        normal2: theta2,
    })
}

pub fn is_isosceles(cap: &Cap, tol: f64) -> bool {
    (cap.side1 - cap.side2).abs() <= tol * (cap.side1 + cap.side2)
}

/// Area between the two cap segments and the disc.
pub fn cap_area(disc: &ConvexDisc, cap: &Cap) -> f64 {
    let mut pts = disc.vertices.clone();
    pts.push(cap.apex);
    signed_area(&convex_hull(pts)) - disc.area()
}

fn convex_hull(mut pts: Vec<EPoint>) -> Vec<EPoint> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut hull: Vec<EPoint> = Vec::with_capacity(pts.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        for &p in pts.iter() {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (b - a).cross(p - b) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
        if pass == 0 {
            pts.reverse();
        }
    }
    hull
}

/// Normal pair of the cap with axis direction `θ` and apex angle `α`.
fn axis_normals(theta: f64, alpha: f64) -> (f64, f64) {
    let half = (PI - alpha) / 2.0;
    (theta + half, theta - half)
}

/// Isosceles cap of angle `alpha`.
///
/// The axis direction is split at every breakpoint where one of the two
/// supporting lines becomes parallel to an edge. On each open piece the
/// contacts are fixed vertices `P`, `Q`, and the isosceles apex is the point
/// on the perpendicular bisector of `PQ` that sees the segment under `alpha`.
/// A root is kept when its axis direction falls inside the piece. If no piece
/// has a root, the cap is taken at a breakpoint where the side difference
/// changes sign, with the contact moved inside the edge.
pub fn find_isosceles_cap(disc: &ConvexDisc, alpha: f64, tol: f64) -> Result<Cap, CapError> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(CapError::AngleOutOfRange(alpha));
    }
    let half = (PI - alpha) / 2.0;
    let diam = disc.diameter();
    let mut breaks: Vec<f64> = disc
        .normals
        .iter()
        .flat_map(|&a| [(a - half).rem_euclid(TAU), (a + half).rem_euclid(TAU)])
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);

    let mut best: Option<(Cap, f64)> = None;
    let nb = breaks.len();
    for i in 0..nb {
        let lo = breaks[i];
        let hi = if i + 1 < nb { breaks[i + 1] } else { breaks[0] + TAU };
        if hi - lo <= 1e-13 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let (t1, t2) = axis_normals(mid, alpha);
        let (Contact::Vertex(pi), Contact::Vertex(qi)) = (disc.support(t1).1, disc.support(t2).1) else {
            continue;
        };
        if pi == qi {
            continue;
        }
        let (p, q) = (disc.vertices[pi], disc.vertices[qi]);
        let m = (p + q) * 0.5;
        let dir = EPoint::from_angle(mid);
        let w = (q - p).perp().normalized();
        let w = if w.dot(dir) >= 0.0 { w } else { -w };
        let s = m + w * (p.dist(q) / (2.0 * (alpha / 2.0).tan()));
        // axis direction is the bisector of the two outward normals
        let u1 = (s - p).perp().normalized();
        let u1 = if u1.dot(dir) >= 0.0 { u1 } else { -u1 };
        let theta = u1.angle() - half;
        let off = (theta - lo).rem_euclid(TAU);
        if off < -1e-12 || off > hi - lo + 1e-12 {
            continue;
        }
        let (n1, n2) = axis_normals(lo + off.clamp(0.0, hi - lo), alpha);
        let Ok(cap) = cap_from_normals(disc, n1, n2) else { continue };
        if (cap.side1 - cap.side2).abs() > tol * diam {
            continue;
        }
        let area = cap_area(disc, &cap);
        if best.as_ref().is_none_or(|(_, a)| area > *a) {
            best = Some((cap, area));
        }
    }
    if let Some((cap, _)) = best {
        return Ok(cap);
    }
    edge_contact_cap(disc, alpha, &breaks, tol).ok_or(CapError::SearchFailed)
}

/// Isosceles cap at a breakpoint, with one contact inside an edge.
fn edge_contact_cap(disc: &ConvexDisc, alpha: f64, breaks: &[f64], tol: f64) -> Option<Cap> {
    let diam = disc.diameter();
    let mut best: Option<(Cap, f64)> = None;
    for &b in breaks {
        let (n1, n2) = axis_normals(b, alpha);
        let (l1, c1) = support_line(disc, n1);
        let (l2, c2) = support_line(disc, n2);
        let Some(apex) = l1.intersect(&l2) else { continue };
        let pick = |set: ContactSet, target: f64| match set {
            ContactSet::Vertex(v) => ((v.dist(apex) - target).abs() <= tol * diam).then_some(v),
            ContactSet::Edge(a, b) => {
                let (da, db) = (a.dist(apex), b.dist(apex));
                let (near, far, dn, df) = if da <= db { (a, b, da, db) } else { (b, a, db, da) };
                (target >= dn - tol * diam && target <= df + tol * diam)
                    .then(|| near + (far - near).normalized() * (target - dn).clamp(0.0, df - dn))
            }
        };
        let candidates = [
            (c1, c2.nearest_to(apex), true),
            (c2, c1.nearest_to(apex), false),
        ];
        for (set, other, first) in candidates {
            let target = other.dist(apex);
            if target <= 1e-12 * diam {
                continue;
            }
            let Some(p) = pick(set, target) else { continue };
            let (contact1, contact2) = if first { (p, other) } else { (other, p) };
            let cap = Cap {
                apex,
                contact1,
                contact2,
                side1: contact1.dist(apex),
                side2: contact2.dist(apex),
                angle: alpha,
                normal1: n1,
                normal2: n2,
            };
            let area = cap_area(disc, &cap);
            if best.as_ref().is_none_or(|(_, a)| area > *a) {
                best = Some((cap, area));
            }
        }
    }
    best.map(|(c, _)| c)
}

/// Options of the non-isosceles grid search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapGrid {
    /// Samples of the first normal direction over a full turn.
    pub directions: usize,
    /// Samples of the cap angle.
    pub angles: usize,
    pub min_angle: f64,
    pub max_angle: f64,
    /// Caps with a side shorter than this fraction of the diameter are skipped.
    pub min_side: f64,
    /// Fractional shift of both grids, in `[0, 1)`.
    pub offset: f64,
}

impl Default for CapGrid {
    fn default() -> Self {
        CapGrid {
            directions: 720,
            angles: 64,
            min_angle: 0.3,
            max_angle: FRAC_PI_2,
            min_side: 1e-2,
            offset: 0.0,
        }
    }
}

impl CapGrid {
    /// `(θ1, θ2)` of grid cell `(i, j)`; `θ2 = θ1 − (π − α)`.
    pub fn normals(&self, i: usize, j: usize) -> (f64, f64, f64) {
        let t1 = TAU * (i as f64 + self.offset) / self.directions as f64;
        let frac = (j as f64 + self.offset) / self.angles as f64;
        let alpha = self.min_angle + (self.max_angle - self.min_angle) * frac.min(1.0);
        (t1, t1 - (PI - alpha), alpha)
    }
}

/// Cap with the largest relative side difference over the default grid, or
/// `None` when every sampled cap is isosceles within `margin`.
pub fn find_non_isosceles_cap(disc: &ConvexDisc, margin: f64) -> Option<Cap> {
    find_non_isosceles_cap_on(disc, margin, &CapGrid::default())
}

pub fn find_non_isosceles_cap_on(disc: &ConvexDisc, margin: f64, grid: &CapGrid) -> Option<Cap> {
    let diam = disc.diameter();
    let near_edge = |t: f64| {
        disc.normals
            .iter()
            .any(|&a| ((t - a + PI).rem_euclid(TAU) - PI).abs() <= 1e-6)
    };
    let mut best: Option<Cap> = None;
    for i in 0..grid.directions {
        for j in 0..grid.angles {
            let (t1, t2, _) = grid.normals(i, j);
            if near_edge(t1) || near_edge(t2) {
                continue;
            }
            let Ok(cap) = cap_from_normals(disc, t1, t2) else { continue };
            if cap.side1.min(cap.side2) < grid.min_side * diam {
                continue;
            }
            if cap.relative_difference() > margin
                && best.as_ref().is_none_or(|b| cap.relative_difference() > b.relative_difference())
            {
                best = Some(cap);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexDisc {
        ConvexDisc::new(vec![
            EPoint::new(0.0, 0.0),
            EPoint::new(1.0, 0.0),
            EPoint::new(1.0, 1.0),
            EPoint::new(0.0, 1.0),
        ])
        .unwrap()
    }

    /// Outward normal angles of the two tangent lines from `s`.
    fn tangent_normals(disc: &ConvexDisc, s: EPoint) -> (f64, f64) {
        let mut found = Vec::new();
        for &v in disc.vertices() {
            let u = (v - s).perp().normalized();
            for u in [u, -u] {
                let h = u.dot(v);
                if disc.vertices().iter().all(|&w| u.dot(w) <= h + 1e-12) && u.dot(s) > h - 1e-12 {
                    found.push(u.angle());
                }
            }
        }
        found.sort_by(f64::total_cmp);
        found.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        assert_eq!(found.len(), 2, "{found:?}");
        (found[0], found[1])
    }

    #[test]
    fn canonicalization() {
        let cw = ConvexDisc::new(vec![
            EPoint::new(0.0, 0.0),
            EPoint::new(0.0, 1.0),
            EPoint::new(0.5, 1.0),
            EPoint::new(1.0, 1.0),
            EPoint::new(1.0, 0.0),
            EPoint::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(cw.len(), 4);
        assert!((cw.area() - 1.0).abs() < 1e-15);
        assert!(matches!(
            ConvexDisc::new(vec![EPoint::new(0.0, 0.0), EPoint::new(1.0, 0.0), EPoint::new(2.0, 0.0)]),
            Err(CapError::TooFewVertices)
        ));
        let dart = vec![
            EPoint::new(0.0, 0.0),
            EPoint::new(2.0, 1.0),
            EPoint::new(0.0, 2.0),
            EPoint::new(0.5, 1.0),
        ];
        assert!(matches!(ConvexDisc::new(dart), Err(CapError::NotConvex(_))));
    }

    #[test]
    fn support_lines_of_the_square() {
        let (l, c) = support_line(&square(), 0.0);
        assert_eq!((l.normal, l.offset), (EPoint::new(1.0, 0.0), 1.0));
        assert_eq!(c, ContactSet::Edge(EPoint::new(1.0, 0.0), EPoint::new(1.0, 1.0)));
        let (l, c) = support_line(&square(), PI / 4.0);
        assert!((l.offset - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(c, ContactSet::Vertex(EPoint::new(1.0, 1.0)));
        let (_, c) = support_line(&square(), -PI / 2.0 + 1e-13);
        assert_eq!(c, ContactSet::Edge(EPoint::new(0.0, 0.0), EPoint::new(1.0, 0.0)));
    }

    #[test]
    fn hexagon_contact_between_edge_normals() {
        let hex = ConvexDisc::regular(6, 1.0);
        for k in 0..6 {
            let a = hex.edge_normal_angle(k) + 0.3;
            let (_, c) = support_line(&hex, a);
            let u = EPoint::from_angle(a);
            let best = hex
                .vertices()
                .iter()
                .copied()
                .max_by(|p, q| u.dot(*p).total_cmp(&u.dot(*q)))
                .unwrap();
            assert_eq!(c, ContactSet::Vertex(best));
        }
    }

    #[test]
    fn symmetric_cap_of_the_square() {
        let sq = square();
        let (t1, t2) = tangent_normals(&sq, EPoint::new(2.0, 0.5));
        let cap = cap_from_normals(&sq, t1, t2).unwrap();
        assert!(cap.apex.dist(EPoint::new(2.0, 0.5)) < 1e-15);
        let contacts = [cap.contact1, cap.contact2];
        assert!(contacts.contains(&EPoint::new(1.0, 1.0)) && contacts.contains(&EPoint::new(1.0, 0.0)));
        assert!((cap.side1 - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((cap.side2 - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((cap.angle - 2.0 * 0.5f64.atan()).abs() < 1e-15);
        assert!((cap.angle - 0.927_295_218_001_612_2).abs() < 1e-15);
        assert!(is_isosceles(&cap, 1e-9));
    }

    #[test]
    fn skew_cap_of_the_square() {
        let sq = square();
        let (t1, t2) = tangent_normals(&sq, EPoint::new(3.0, 1.5));
        let cap = cap_from_normals(&sq, t1, t2).unwrap();
        let mut sides = [cap.side1, cap.side2];
        sides.sort_by(f64::total_cmp);
        assert!((sides[0] - 2.5).abs() < 1e-14);
        assert!((sides[1] - 9.25f64.sqrt()).abs() < 1e-14);
        let contacts = [cap.contact1, cap.contact2];
        assert!(contacts.contains(&EPoint::new(0.0, 1.0)) && contacts.contains(&EPoint::new(1.0, 0.0)));
        assert!(!is_isosceles(&cap, 1e-9));
        assert!((cap.ray_angle() - cap.angle).abs() < 1e-12);
    }

    #[test]
    fn cap_errors() {
        let sq = square();
        assert!(matches!(cap_from_normals(&sq, 0.3, 0.3), Err(CapError::ParallelNormals)));
        assert!(matches!(cap_from_normals(&sq, 0.3, 0.3 + PI), Err(CapError::ParallelNormals)));
        // both lines touch the same corner
        assert!(matches!(cap_from_normals(&sq, 0.1, 1.2), Err(CapError::Degenerate)));
    }

    #[test]
    fn right_angle_isosceles_cap_of_the_square() {
        let sq = square();
        let cap = find_isosceles_cap(&sq, FRAC_PI_2, 1e-9).unwrap();
        assert!((cap.side1 - cap.side2).abs() < 1e-12);
        assert!((cap.angle - FRAC_PI_2).abs() < 1e-12);
        // apex above the middle of an edge, on a symmetry axis of the square
        let c = EPoint::new(0.5, 0.5);
        assert!((cap.apex.dist(c) - 1.0).abs() < 1e-12);
        let d = cap.apex - c;
        assert!(d.x.abs() < 1e-12 || d.y.abs() < 1e-12);
    }

    #[test]
    fn equilateral_triangle_cap_on_symmetry_axis() {
        let tri = ConvexDisc::regular(3, 1.0);
        let cap = find_isosceles_cap(&tri, PI / 3.0, 1e-9).unwrap();
        assert!((cap.side1 - cap.side2).abs() < 1e-12);
        let dir = cap.apex.angle();
        let k = (dir / (PI / 3.0)).round();
        assert!((dir - k * PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn scalene_triangle_cap() {
        let tri = ConvexDisc::new(vec![EPoint::new(0.0, 0.0), EPoint::new(4.0, 0.0), EPoint::new(1.0, 2.0)]).unwrap();
        let cap = find_isosceles_cap(&tri, 1.0, 1e-9).unwrap();
        assert!((cap.side1 - cap.side2).abs() < 1e-9 * tri.diameter());
        assert!((cap.angle - 1.0).abs() < 1e-12);
        assert!(matches!(find_isosceles_cap(&tri, PI, 1e-9), Err(CapError::AngleOutOfRange(_))));
    }

    #[test]
    fn non_isosceles_search() {
        let cap = find_non_isosceles_cap(&square(), 1e-3).unwrap();
        assert!(cap.relative_difference() > 1e-3);
        let tri = ConvexDisc::new(vec![EPoint::new(0.0, 0.0), EPoint::new(4.0, 0.0), EPoint::new(1.0, 2.0)]).unwrap();
        assert!(find_non_isosceles_cap(&tri, 1e-3).unwrap().relative_difference() > 0.05);
        assert!(find_non_isosceles_cap(&ConvexDisc::regular(360, 1.0), 1e-2).is_none());
    }

    #[test]
    fn diameter_matches_brute_force() {
        for m in [3, 4, 7, 60, 361] {
            let d = ConvexDisc::regular(m, 1.3).transformed(0.7, 0.4, EPoint::new(2.0, -1.0));
            let v = d.vertices();
            let brute = v.iter().flat_map(|a| v.iter().map(move |b| a.dist(*b))).fold(0.0, f64::max);
            assert_eq!(d.diameter(), brute);
        }
    }

    #[test]
    fn cap_area_of_symmetric_square_cap() {
        let sq = square();
        let (t1, t2) = tangent_normals(&sq, EPoint::new(2.0, 0.5));
        let cap = cap_from_normals(&sq, t1, t2).unwrap();
        assert!((cap_area(&sq, &cap) - 0.5).abs() < 1e-15);
    }
}
