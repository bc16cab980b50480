//! Greatest-potential diagrams on the unit sphere.
//!
//! A cell is an intersection of closed hemispheres. Besides proper polygons
//! it can be the whole sphere (no constraints), a hemisphere (no vertices) or
//! a lune (two antipodal vertices joined by two half great circles), so the
//! loop code never assumes three or more vertices. Each edge remembers the
//! constraint it lies on, which disambiguates the half great circles of a lune.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{Clip, TilingError, VerifyReport};
use crate::geom::{sbisector, spot, GreatCircleS, SDisc, SPoint, Vec3};

const EPS: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCellS {
    pub owner: usize,
    pub constraints: Vec<GreatCircleS>,
    pub neighbors: Vec<Option<usize>>,
    /// Counterclockwise as seen from outside the sphere.
    pub vertices: Vec<SPoint>,
    /// `edges[k]` indexes the constraint carrying the arc from vertex `k` to `k+1`.
    /// A hemisphere cell has no vertices and a single entry here.
    pub edges: Vec<usize>,
}

impl ConvexCellS {
    pub fn full(owner: usize) -> Self {
        ConvexCellS {
            owner,
            constraints: Vec::new(),
            neighbors: Vec::new(),
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_hemisphere(&self) -> bool {
        self.vertices.is_empty() && self.edges.len() == 1
    }

    pub fn is_lune(&self) -> bool {
        self.vertices.len() == 2
    }

    fn edge_normal(&self, k: usize) -> Vec3 {
        self.constraints[self.edges[k]].normal
    }

    /// Intersection with the hemisphere `g`.
    pub fn clipped(&self, g: GreatCircleS, neighbor: Option<usize>) -> Clip<ConvexCellS> {
        let mut next = self.clone();
        next.constraints.push(g);
        next.neighbors.push(neighbor);
        let m = next.constraints.len() - 1;

        if self.is_full() {
            next.edges = vec![m];
            return Clip::Cell(next);
        }
        if self.is_hemisphere() {
            let h = self.edge_normal(0);
            let cross = g.normal.cross(h);
            if cross.norm() < EPS {
                return if h.dot(g.normal) > 0.0 { Clip::Cell(next) } else { Clip::Empty };
            }
            let v = SPoint::normalize(cross).expect("nonzero cross product");
            next.vertices = vec![v, v.antipode()];
            next.edges = vec![self.edges[0], m];
            return Clip::Cell(next);
        }

        // Loop with every arc shorter than a half circle.
        let (mut verts, mut edges) = (self.vertices.clone(), self.edges.clone());
        if self.is_lune() {
            let a = verts[0];
            let mid0 = arc_point(a, self.edge_normal(0), PI / 2.0);
            let mid1 = arc_point(a.antipode(), self.edge_normal(1), PI / 2.0);
            verts = vec![a, mid0, a.antipode(), mid1];
            edges = vec![edges[0], edges[0], edges[1], edges[1]];
        }

        let d: Vec<f64> = verts.iter().map(|v| g.eval(v.vec())).collect();
        if d.iter().all(|&x| x >= -EPS) {
            return Clip::Cell(next);
        }
        if d.iter().all(|&x| x <= EPS) {
            return Clip::Empty;
        }

        let n = verts.len();
        let mut out: Vec<(SPoint, usize)> = Vec::with_capacity(n + 1);
        for k in 0..n {
            let a = verts[k];
            let (da, db) = (d[k], d[(k + 1) % n]);
            let e = next.constraints[edges[k]].normal;
            let (a_in, b_in) = (da >= -EPS, db >= -EPS);
            if a_in {
                out.push((a, edges[k]));
                if !b_in {
                    if da > EPS {
                        out.push((crossing(a, e, g.normal, da), m));
                    } else if let Some(last) = out.last_mut() {
                        last.1 = m;
                    }
                }
            } else if b_in && db > EPS {
                out.push((crossing(a, e, g.normal, da), edges[k]));
            }
        }

        let out = simplify_loop(out);
        match out.len() {
            0 | 1 => return Clip::Empty,
            2 if out[0].0.vec().dot(out[1].0.vec()) > -1.0 + 1e-12 || out[0].1 == out[1].1 => {
                return Clip::Empty
            }
            _ => {}
        }
        next.vertices = out.iter().map(|p| p.0).collect();
        next.edges = out.iter().map(|p| p.1).collect();
        if next.area() <= 1e-15 {
            return Clip::Empty;
        }
        Clip::Cell(next)
    }

    /// Spherical excess; `4π` for the whole sphere.
    pub fn area(&self) -> f64 {
        if self.is_full() {
            return 4.0 * PI;
        }
        if self.is_hemisphere() {
            return 2.0 * PI;
        }
        let n = self.vertices.len();
        let turning: f64 = (0..n)
            .map(|k| {
                let prev = self.edge_normal((k + n - 1) % n);
                let cur = self.edge_normal(k);
                prev.cross(cur).norm().atan2(prev.dot(cur))
            })
            .sum();
        2.0 * PI - turning
    }

    /// Membership through the edge hemispheres of the loop.
    pub fn contains(&self, u: Vec3, tol: f64) -> bool {
        self.edges.iter().all(|&e| self.constraints[e].eval(u) >= -tol)
    }

    /// Vertices plus arc midpoints; a cell lies in a closed hemisphere iff
    /// all of these do.
    pub fn boundary_samples(&self) -> Vec<Vec3> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(2 * n);
        for k in 0..n {
            let a = self.vertices[k];
            let b = self.vertices[(k + 1) % n];
            out.push(a.vec());
            let len = arc_length(a, b, self.edge_normal(k));
            out.push(arc_point(a, self.edge_normal(k), len / 2.0).vec());
        }
        out
    }

    /// Whether the cell lies in the closed hemisphere `g` (within `tol`).
    pub fn within(&self, g: &GreatCircleS, tol: f64) -> bool {
        if self.is_full() {
            return false;
        }
        if self.is_hemisphere() {
            return (self.edge_normal(0) - g.normal).norm() <= tol;
        }
        self.boundary_samples().iter().all(|&u| g.eval(u) >= -tol)
    }

    /// Arc-sampled boundary, at most `step` radians apart.
    pub fn boundary_polyline(&self, step: f64) -> Vec<Vec<Vec3>> {
        if self.is_full() {
            return Vec::new();
        }
        if self.is_hemisphere() {
            let n = self.edge_normal(0);
            let a = any_orthogonal(n);
            let count = (2.0 * PI / step).ceil() as usize;
            let pts = (0..=count)
                .map(|i| arc_point(a, n, 2.0 * PI * i as f64 / count as f64).vec())
                .collect();
            return vec![pts];
        }
        let n = self.vertices.len();
        let mut pts = Vec::new();
        for k in 0..n {
            let a = self.vertices[k];
            let b = self.vertices[(k + 1) % n];
            let e = self.edge_normal(k);
            let len = arc_length(a, b, e);
            let count = ((len / step).ceil() as usize).max(1);
            for i in 0..count {
                pts.push(arc_point(a, e, len * i as f64 / count as f64).vec());
            }
        }
        pts.push(self.vertices[0].vec());
        vec![pts]
    }

    /// Smallest cap around the vertex centroid containing the cell, if the
    /// cell fits in an open hemisphere.
    fn bounding_cap(&self) -> Option<(Vec3, f64)> {
        if self.vertices.len() < 3 {
            return None;
        }
        let sum = self.vertices.iter().fold(Vec3::default(), |s, v| s + v.vec());
        if sum.norm() < 1e-9 {
            return None;
        }
        let c = sum.normalized();
        let min_dot = self.vertices.iter().map(|v| v.vec().dot(c)).fold(1.0f64, f64::min);
        (min_dot > 1e-6).then_some((c, min_dot))
    }
}

/// Point at arc length `s` from `a` along the great circle with inward normal
/// `e`, moving counterclockwise (interior on the left).
fn arc_point(a: SPoint, e: Vec3, s: f64) -> SPoint {
    let t = e.cross(a.vec()).normalized();
    let (sn, c) = s.sin_cos();
    SPoint::normalize(a.vec() * c + t * sn).expect("unit combination")
}

fn arc_length(a: SPoint, b: SPoint, e: Vec3) -> f64 {
    let t = e.cross(a.vec()).normalized();
    let len = b.vec().dot(t).atan2(b.vec().dot(a.vec()));
    if len <= 0.0 {
        len + 2.0 * PI
    } else {
        len
    }
}

/// Zero of `n·u` on the arc leaving `a` along the circle with inward normal `e`.
fn crossing(a: SPoint, e: Vec3, n: Vec3, da: f64) -> SPoint {
    let t = e.cross(a.vec()).normalized();
    let nt = n.dot(t);
    let theta = if da > 0.0 { da.atan2(-nt) } else { (-da).atan2(nt) };
    arc_point(a, e, theta)
}

fn any_orthogonal(n: Vec3) -> SPoint {
    let helper = if n.x.abs() < 0.6 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    SPoint::normalize(n.cross(helper)).expect("nonparallel helper")
}

/// Drops near-duplicate vertices and straight-angle vertices.
fn simplify_loop(mut pts: Vec<(SPoint, usize)>) -> Vec<(SPoint, usize)> {
    let close = |a: &SPoint, b: &SPoint| (a.vec() - b.vec()).norm() <= 1e-13;
    let mut changed = true;
    while changed && pts.len() > 1 {
        changed = false;
        let n = pts.len();
        for k in 0..n {
            let next = (k + 1) % n;
            if close(&pts[k].0, &pts[next].0) {
                // the short arc from k to next vanishes; k inherits next's edge
                pts[k].1 = pts[next].1;
                pts.remove(next);
                changed = true;
                break;
            }
            let prev = (k + n - 1) % n;
            if n > 3 && pts[prev].1 == pts[k].1 {
                pts.remove(k);
                changed = true;
                break;
            }
        }
    }
    // A straight vertex may survive in a triangle only if the result is a lune.
    if pts.len() == 3 {
        for k in 0..3 {
            if pts[(k + 2) % 3].1 == pts[k].1 {
                pts.remove(k);
                break;
            }
        }
    }
    pts
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereTiling {
    pub cells: Vec<ConvexCellS>,
}

impl SphereTiling {
    pub fn locate(&self, u: Vec3, tol: f64) -> Option<usize> {
        self.cells
            .iter()
            .find(|c| match c.bounding_cap() {
                Some((center, min_dot)) if u.dot(center) < min_dot - 1e-9 => false,
                _ => c.contains(u, tol),
            })
            .map(|c| c.owner)
    }
}

pub(super) fn validate(discs: &[SDisc]) -> Result<(), TilingError> {
    for i in 0..discs.len() {
        for j in i + 1..discs.len() {
            if discs[i].clearance(&discs[j]) <= super::MIN_CLEARANCE {
                return Err(TilingError::Overlap(i, j));
            }
        }
    }
    Ok(())
}

fn clip_order(discs: &[SDisc], i: usize) -> Vec<usize> {
    let mut others: Vec<usize> = (0..discs.len()).filter(|&j| j != i).collect();
    let key = |j: usize| {
        let c = discs[j].center.vec();
        (discs[i].clearance(&discs[j]), c.x, c.y, c.z, discs[j].radius)
    };
    others.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    others
}

/// Like `sbisector`, but also for antipodal centers, where the equipotential
/// circle is still the one with normal `o1/cos r1 - o2/cos r2`.
fn equipotential(c1: &SDisc, c2: &SDisc) -> Result<GreatCircleS, TilingError> {
    if c1.center.dot(c2.center) < 0.0 {
        let n = c1.center.vec() * (1.0 / c1.radius.cos()) - c2.center.vec() * (1.0 / c2.radius.cos());
        return Ok(GreatCircleS::new(n)?);
    }
    Ok(sbisector(c1, c2)?)
}

/// Greatest-potential partition of the sphere.
pub fn build_spherical_diagram(discs: &[SDisc]) -> Result<SphereTiling, TilingError> {
    if discs.len() < 2 {
        return Err(TilingError::SingleSphereDisc);
    }
    validate(discs)?;
    let cells = (0..discs.len())
        .into_par_iter()
        .map(|i| {
            let mut cell = ConvexCellS::full(i);
            for j in clip_order(discs, i) {
                let g = equipotential(&discs[i], &discs[j])?;
                cell = match cell.clipped(g, Some(j)) {
                    Clip::Cell(c) => c,
                    Clip::Empty => return Err(TilingError::EmptyCell(i)),
                };
            }
            Ok(cell)
        })
        .collect::<Result<Vec<_>, TilingError>>()?;
    Ok(SphereTiling { cells })
}

/// Index maximizing the spherical potential, lowest index on ties.
pub fn argmax_spot(discs: &[SDisc], u: SPoint) -> usize {
    let mut best = 0;
    for (j, d) in discs.iter().enumerate().skip(1) {
        if spot(u, d) > spot(u, &discs[best]) {
            best = j;
        }
    }
    best
}

pub fn verify(discs: &[SDisc], tiling: &SphereTiling, tol: f64) -> Result<VerifyReport, TilingError> {
    super::owner_map(tiling.cells.iter().map(|c| c.owner), discs.len())?;
    let mut report = VerifyReport::new(discs.len(), 4.0 * PI);

    for (k, cell) in tiling.cells.iter().enumerate() {
        if cell.neighbors.len() != cell.constraints.len() && !cell.neighbors.is_empty() {
            return Ok(report.fail(format!("cell {k} has inconsistent neighbor list")));
        }
        if cell.edges.iter().any(|&e| e >= cell.constraints.len())
            || (cell.vertices.len() != cell.edges.len() && !cell.is_hemisphere())
        {
            return Ok(report.fail(format!("cell {k} has a malformed edge list")));
        }
        if cell.is_lune() && cell.vertices[0].dot(cell.vertices[1]) > -1.0 + 1e-9 {
            return Ok(report.fail(format!("cell {k}: lune vertices are not antipodal")));
        }
        for (ci, g) in cell.constraints.iter().enumerate() {
            if let Some(v) = cell.boundary_samples().iter().position(|&u| g.eval(u) < -tol) {
                return Ok(report.fail(format!(
                    "cell {k}: boundary point {v} violates constraint {ci}"
                )));
            }
        }
        for (v, p) in cell.vertices.iter().enumerate() {
            let (e_in, e_out) = (cell.edge_normal((v + cell.vertices.len() - 1) % cell.vertices.len()), cell.edge_normal(v));
            if e_in.dot(p.vec()).abs() > tol || e_out.dot(p.vec()).abs() > tol {
                return Ok(report.fail(format!("cell {k}: vertex {v} is off its edges")));
            }
        }
    }

    for (k, cell) in tiling.cells.iter().enumerate() {
        let disc = &discs[cell.owner];
        let o = disc.center.vec();
        for (ci, g) in cell.constraints.iter().enumerate() {
            if g.eval(o) < disc.radius.sin() - tol {
                return Ok(report.fail(format!(
                    "cell {k} does not contain disc {}: constraint {ci} cuts it",
                    cell.owner
                )));
            }
        }
        if !cell.contains(o, tol) {
            return Ok(report.fail(format!("cell {k} does not contain disc {}", cell.owner)));
        }
        let inside = discs.iter().filter(|d| cell.contains(d.center.vec(), -tol)).count();
        if inside > 1 {
            return Ok(report.fail(format!("cell {k} contains {inside} discs")));
        }
    }

    for i in 0..tiling.cells.len() {
        for j in i + 1..tiling.cells.len() {
            if !separated(&tiling.cells[i], &tiling.cells[j], tol) {
                return Ok(report.fail(format!("cells {i} and {j} overlap")));
            }
        }
    }

    report.area_sum = tiling.cells.iter().map(ConvexCellS::area).sum();
    report.check_coverage()
}

fn separated(a: &ConvexCellS, b: &ConvexCellS, tol: f64) -> bool {
    let hinted = a
        .neighbors
        .iter()
        .position(|n| *n == Some(b.owner))
        .map(|ci| b.within(&a.constraints[ci].flipped(), tol))
        .unwrap_or(false);
    hinted
        || a.constraints.iter().any(|g| b.within(&g.flipped(), tol))
        || b.constraints.iter().any(|g| a.within(&g.flipped(), tol))
}
