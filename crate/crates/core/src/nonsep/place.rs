//! Rigid placement of the copies at the ring vertices.

use serde::{Deserialize, Serialize};

use super::{ConstructionParams, NonsepError, RingPolygon};
use crate::caps::{Cap, ConvexDisc};
use crate::geom::EPoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedDisc {
    /// Image of the base disc under `x ↦ scale·Rot(rotation)·x + translation`.
    pub rotation: f64,
    pub translation: EPoint,
    pub scale: f64,
    #[serde(flatten)]
    pub disc: ConvexDisc,
    /// Where the placed cap apex lands.
    pub apex: EPoint,
    /// Placed contact on the incoming-edge extension (short side for the
    /// congruent copies).
    pub contact_in: EPoint,
    /// Placed contact on the outgoing edge ray.
    pub contact_out: EPoint,
}

impl PlacedDisc {
    pub fn map(&self, p: EPoint) -> EPoint {
        p.rotate(self.rotation) * self.scale + self.translation
    }
}

/// Places `disc` so that the cap apex goes to `v`, the ray towards `c_in`
/// points along `d_in` and the ray towards `c_out` along the turned direction.
fn place(disc: &ConvexDisc, apex: EPoint, c_in: EPoint, c_out: EPoint, scale: f64, v: EPoint, d_in: EPoint) -> PlacedDisc {
    let rotation = d_in.angle() - (c_in - apex).angle();
    let translation = v - apex.rotate(rotation) * scale;
    let mut placed = PlacedDisc {
        rotation,
        translation,
        scale,
        disc: disc.transformed(scale, rotation, translation),
        apex: v,
        contact_in: EPoint::default(),
        contact_out: EPoint::default(),
    };
    placed.contact_in = placed.map(c_in);
    placed.contact_out = placed.map(c_out);
    placed
}

/// `(c_in, c_out)` of a cap so that the turn from the `c_in` ray to the
/// `c_out` ray has the sign `orientation`.
fn oriented(cap: &Cap, orientation: i8) -> (EPoint, EPoint) {
    let turn = (cap.contact2 - cap.apex).cross(cap.contact1 - cap.apex);
    if (turn >= 0.0) == (orientation > 0) {
        (cap.contact2, cap.contact1)
    } else {
        (cap.contact1, cap.contact2)
    }
}

/// Copy `k < n` sits at ring vertex `k` inside the wedge between the
/// extension of edge `k-1` and edge `k`, short side on the extension and long
/// side along edge `k`. The scaled copy sits at vertex `n` in the `β` corner.
pub fn place_copies(
    disc: &ConvexDisc,
    params: &ConstructionParams,
    ring: &RingPolygon,
) -> Result<Vec<PlacedDisc>, NonsepError> {
    let m = ring.len();
    let n = params.n;
    let cap = &params.cap;
    let mut out = Vec::with_capacity(m);
    for k in 0..n {
        let d_in = ring.direction((k + m - 1) % m);
        out.push(place(disc, cap.apex, cap.contact2, cap.contact1, 1.0, ring.vertices()[k], d_in));
    }
    let (c_in, c_out) = oriented(&params.beta_cap, params.orientation);
    let d_in = ring.direction(n - 1);
    out.push(place(disc, params.beta_cap.apex, c_in, c_out, params.scale, ring.vertices()[n], d_in));

    for i in 0..m {
        for j in i + 1..m {
            let gap = polygon_gap(out[i].disc.vertices(), out[j].disc.vertices());
            if gap <= 0.0 {
                return Err(NonsepError::Overlap(i, j, -gap));
            }
        }
    }
    Ok(out)
}

/// Largest separation of two convex polygons along their edge normals;
/// negative values are penetration depths.
pub fn polygon_gap(a: &[EPoint], b: &[EPoint]) -> f64 {
    fn along(p: &[EPoint], q: &[EPoint]) -> f64 {
        let n = p.len();
        (0..n)
            .map(|k| {
                let e = p[(k + 1) % n] - p[k];
                let u = EPoint::new(e.y, -e.x).normalized();
                let hi = p.iter().map(|&x| u.dot(x)).fold(f64::MIN, f64::max);
                let lo = q.iter().map(|&x| u.dot(x)).fold(f64::MAX, f64::min);
                lo - hi
            })
            .fold(f64::MIN, f64::max)
    }
    along(a, b).max(along(b, a))
}

/// Euclidean distance between two disjoint convex polygons.
pub fn polygon_distance(a: &[EPoint], b: &[EPoint]) -> f64 {
    fn seg(p: EPoint, a: EPoint, b: EPoint) -> f64 {
        let d = b - a;
        let t = ((p - a).dot(d) / d.norm2()).clamp(0.0, 1.0);
        p.dist(a + d * t)
    }
    fn one_way(p: &[EPoint], q: &[EPoint]) -> f64 {
        let n = q.len();
        p.iter()
            .flat_map(|&x| (0..n).map(move |k| seg(x, q[k], q[(k + 1) % n])))
            .fold(f64::MAX, f64::min)
    }
    one_way(a, b).min(one_way(b, a))
}
