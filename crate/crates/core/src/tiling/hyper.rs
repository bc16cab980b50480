//! Least-potential diagrams in the hyperbolic plane.
//!
//! Cells are computed in the Klein disc, where geodesic half-planes are
//! Euclidean half-planes restricted to the unit disc. A cell is stored as a
//! loop of boundary vertices; vertices on the unit circle are ideal, and the
//! edge leaving a vertex is either a geodesic (constraint index) or an arc of
//! the circle at infinity. Cells are unbounded in general, so areas are taken
//! inside a clip disc of hyperbolic radius `R` about the model origin.

use std::f64::consts::{FRAC_PI_4, TAU};

use rayon::prelude::*;

use super::{Clip, TilingError, VerifyReport};
use crate::geom::{hbisector, hpot, EPoint, GeodesicH, HDisc, HPoint, OrientedLineE};

/// Half side of the Klein square every clip starts from.
const KLEIN_BOX: f64 = 1.25;
/// Relative slack when deciding that a Klein point sits on a circle.
const ON_CIRCLE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HVertex {
    pub klein: EPoint,
    pub ideal: bool,
    /// Constraint carrying the edge to the next vertex; `None` for an ideal arc.
    pub edge: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCellH {
    pub owner: usize,
    pub constraints: Vec<GeodesicH>,
    pub neighbors: Vec<Option<usize>>,
    /// Counterclockwise in the Klein disc; empty for the whole plane.
    pub vertices: Vec<HVertex>,
}

impl ConvexCellH {
    pub fn whole(owner: usize) -> Self {
        ConvexCellH {
            owner,
            constraints: Vec::new(),
            neighbors: Vec::new(),
            vertices: Vec::new(),
        }
    }

    pub fn is_whole(&self) -> bool {
        self.constraints.is_empty()
    }

    fn klein_lines(&self) -> Vec<OrientedLineE> {
        self.constraints.iter().map(GeodesicH::klein_line).collect()
    }

    /// Euclidean polygon `P'` with `P' ∩ D` equal to the cell; ideal arcs are
    /// replaced by circumscribed tangent polygons.
    pub fn bounding_polygon(&self) -> Vec<(EPoint, Option<usize>)> {
        if self.vertices.is_empty() {
            let b = KLEIN_BOX;
            return [(-b, -b), (b, -b), (b, b), (-b, b)]
                .iter()
                .map(|&(x, y)| (EPoint::new(x, y), None))
                .collect();
        }
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n + 8);
        for k in 0..n {
            let v = self.vertices[k];
            out.push((v.klein, v.edge));
            if v.edge.is_none() {
                let a = v.klein.angle();
                let span = ccw_angle(v.klein, self.vertices[(k + 1) % n].klein);
                let pieces = (span / FRAC_PI_4).ceil().max(1.0) as usize;
                let step = span / pieces as f64;
                let rad = 1.0 / (step / 2.0).cos();
                for i in 0..pieces {
                    let phi = a + (i as f64 + 0.5) * step;
                    out.push((EPoint::from_angle(phi) * rad, None));
                }
            }
        }
        out
    }

    pub fn clipped(&self, g: GeodesicH, neighbor: Option<usize>) -> Clip<ConvexCellH> {
        let mut next = self.clone();
        next.constraints.push(g);
        next.neighbors.push(neighbor);
        let m = next.constraints.len() - 1;
        let poly = clip_labeled(&self.bounding_polygon(), &g.klein_line(), m);
        let lp = boundary_loop(&poly, 1.0);
        if lp.len() < 2 {
            return Clip::Empty;
        }
        next.vertices = lp;
        Clip::Cell(next)
    }

    /// Hyperbolic area of the part inside the clip disc of radius `clip`.
    pub fn area(&self, clip: f64) -> f64 {
        let disc_area = TAU * (clip.cosh() - 1.0);
        if self.is_whole() {
            return disc_area;
        }
        let t = clip.tanh();
        let lp = boundary_loop(&self.bounding_polygon(), t);
        if lp.is_empty() {
            let probe = EPoint::new(t, 0.0);
            return if self.klein_lines().iter().all(|l| l.eval(probe) <= 0.0) { disc_area } else { 0.0 };
        }
        let n = lp.len();
        (0..n)
            .map(|k| {
                let (a, b) = (lp[k].klein, lp[(k + 1) % n].klein);
                match lp[k].edge {
                    Some(_) => chord_term(a, b),
                    None => (clip.cosh() - 1.0) * ccw_angle(a, b),
                }
            })
            .sum()
    }

    /// Exact area of a bounded cell, i.e. its angle deficit.
    pub fn bounded_area(&self) -> Result<f64, TilingError> {
        if self.is_whole() || self.vertices.iter().any(|v| v.ideal) {
            return Err(TilingError::Unbounded);
        }
        let n = self.vertices.len();
        Ok((0..n).map(|k| chord_term(self.vertices[k].klein, self.vertices[(k + 1) % n].klein)).sum())
    }

    pub fn contains_klein(&self, k: EPoint, tol: f64) -> bool {
        self.klein_lines().iter().all(|l| l.eval(k) <= tol)
    }

    pub fn contains(&self, x: HPoint, tol: f64) -> bool {
        self.constraints.iter().all(|g| g.eval(x.vec()) <= tol * x.vec().x)
    }

    /// Whether the whole cell lies in the closed Klein half-plane `line`.
    pub fn within(&self, line: &OrientedLineE, tol: f64) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let n = self.vertices.len();
        (0..n).all(|k| {
            let v = self.vertices[k];
            if line.eval(v.klein) > tol {
                return false;
            }
            match v.edge {
                Some(_) => true,
                None => {
                    let w = self.vertices[(k + 1) % n].klein;
                    let dir = line.normal;
                    let inner = ccw_angle(v.klein, dir);
                    !(inner > 1e-12 && inner < ccw_angle(v.klein, w) - 1e-12)
                }
            }
        })
    }
}

/// Counterclockwise angle from the direction of `a` to that of `b`, in `(0, 2π]`.
fn ccw_angle(a: EPoint, b: EPoint) -> f64 {
    let d = a.cross(b).atan2(a.dot(b));
    if d <= 0.0 {
        d + TAU
    } else {
        d
    }
}

/// `∫ (cosh ρ - 1) dφ` along the Klein chord from `a` to `b`.
fn chord_term(a: EPoint, b: EPoint) -> f64 {
    let d = b - a;
    let len = d.norm();
    if len < 1e-300 {
        return 0.0;
    }
    let d = d * (1.0 / len);
    let foot = a - d * a.dot(d);
    let h = foot.norm();
    if h < 1e-15 {
        return 0.0;
    }
    let nu = foot * (1.0 / h);
    let tau = nu.perp();
    let s = (1.0 - h * h).sqrt();
    let g = |k: EPoint| {
        let psi = tau.dot(k).atan2(nu.dot(k));
        (psi.sin() / s).clamp(-1.0, 1.0).asin() - psi
    };
    g(b) - g(a)
}

/// Sutherland-Hodgman step keeping edge labels; `label` tags the new edge.
fn clip_labeled(
    poly: &[(EPoint, Option<usize>)],
    line: &OrientedLineE,
    label: usize,
) -> Vec<(EPoint, Option<usize>)> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..n {
        let (a, la) = poly[k];
        let (b, _) = poly[(k + 1) % n];
        let (da, db) = (line.eval(a), line.eval(b));
        if da <= 0.0 {
            out.push((a, la));
            if db > 0.0 {
                let t = da / (da - db);
                out.push((a.lerp(b, t), Some(label)));
            }
        } else if db <= 0.0 {
            let t = da / (da - db);
            out.push((a.lerp(b, t), la));
        }
    }
    out
}

/// Boundary of `poly ∩ {|k| < rad}` as a loop of chords and arcs.
fn boundary_loop(poly: &[(EPoint, Option<usize>)], rad: f64) -> Vec<HVertex> {
    let n = poly.len();
    let r2 = rad * rad;
    let mut out: Vec<HVertex> = Vec::new();
    for k in 0..n {
        let (a, label) = poly[k];
        let b = poly[(k + 1) % n].0;
        let d = b - a;
        let dd = d.norm2();
        if dd < 1e-300 {
            continue;
        }
        // distance of the supporting line from the center
        if a.cross(b).abs() / dd.sqrt() >= rad * (1.0 - ON_CIRCLE) {
            continue;
        }
        // |a + t d|² = r², roots t0 < t1
        let p = a.dot(d) / dd;
        let q = (a.norm2() - r2) / dd;
        let disc = p * p - q;
        if disc <= 0.0 {
            continue;
        }
        let sq = disc.sqrt();
        let (t0, t1) = ((-p - sq).max(0.0), (-p + sq).min(1.0));
        if t1 - t0 <= 1e-14 {
            continue;
        }
        let a_on = a.norm2() >= r2 * (1.0 - ON_CIRCLE);
        if t0 > 0.0 || a_on {
            let e = a + d * t0;
            out.push(HVertex { klein: e * (rad / e.norm()), ideal: true, edge: label });
        } else {
            out.push(HVertex { klein: a, ideal: false, edge: label });
        }
        let b_on = b.norm2() >= r2 * (1.0 - ON_CIRCLE);
        if t1 < 1.0 || b_on {
            let x = a + d * t1;
            out.push(HVertex { klein: x * (rad / x.norm()), ideal: true, edge: None });
        }
    }
    // merge coincident neighbours, the later vertex keeps its outgoing edge
    let mut k = 0;
    while out.len() > 1 && k < out.len() {
        let nx = (k + 1) % out.len();
        if out[k].klein.dist(out[nx].klein) <= 1e-13 {
            out[nx].ideal |= out[k].ideal;
            out.remove(k);
        } else {
            k += 1;
        }
    }
    // a chord followed by its own continuation is one edge
    if out.len() > 2 {
        let mut k = 0;
        while k < out.len() && out.len() > 2 {
            let prev = (k + out.len() - 1) % out.len();
            if !out[k].ideal && out[k].edge.is_some() && out[k].edge == out[prev].edge {
                out.remove(k);
            } else {
                k += 1;
            }
        }
    }
    if out.len() == 1 {
        out.clear();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperTiling {
    pub clip_radius: f64,
    pub cells: Vec<ConvexCellH>,
}

impl HyperTiling {
    pub fn locate(&self, x: HPoint, tol: f64) -> Option<usize> {
        self.cells.iter().find(|c| c.contains(x, tol)).map(|c| c.owner)
    }

    pub fn clip_area(&self) -> f64 {
        TAU * (self.clip_radius.cosh() - 1.0)
    }
}

/// Clip radius comfortably containing every disc.
pub fn default_clip_radius(discs: &[HDisc]) -> f64 {
    let far = discs
        .iter()
        .map(|d| d.center.vec().x.max(1.0).acosh())
        .fold(0.0, f64::max);
    let rmax = discs.iter().map(|d| d.radius).fold(0.0, f64::max);
    far + rmax + 2.0
}

pub(super) fn validate(discs: &[HDisc]) -> Result<(), TilingError> {
    for i in 0..discs.len() {
        for j in i + 1..discs.len() {
            if discs[i].clearance(&discs[j]) <= super::MIN_CLEARANCE {
                return Err(TilingError::Overlap(i, j));
            }
        }
    }
    Ok(())
}

fn clip_order(discs: &[HDisc], i: usize) -> Vec<usize> {
    let mut others: Vec<usize> = (0..discs.len()).filter(|&j| j != i).collect();
    let key = |j: usize| {
        let c = discs[j].center.vec();
        (discs[i].clearance(&discs[j]), c.x, c.y, c.z, discs[j].radius)
    };
    others.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    others
}

pub fn build_hyperbolic_diagram(
    discs: &[HDisc],
    clip_radius: Option<f64>,
) -> Result<HyperTiling, TilingError> {
    validate(discs)?;
    let clip_radius = clip_radius.unwrap_or_else(|| default_clip_radius(discs));
    if !(clip_radius > 0.0 && clip_radius.is_finite()) {
        return Err(TilingError::InvalidDomain(format!("clip radius {clip_radius}")));
    }
    let cells = (0..discs.len())
        .into_par_iter()
        .map(|i| {
            let mut cell = ConvexCellH::whole(i);
            for j in clip_order(discs, i) {
                let g = hbisector(&discs[i], &discs[j])?;
                cell = match cell.clipped(g, Some(j)) {
                    Clip::Cell(c) => c,
                    Clip::Empty => return Err(TilingError::EmptyCell(i)),
                };
            }
            Ok(cell)
        })
        .collect::<Result<Vec<_>, TilingError>>()?;
    Ok(HyperTiling { clip_radius, cells })
}

/// Index minimizing the hyperbolic potential, lowest index on ties.
pub fn argmin_hpot(discs: &[HDisc], x: HPoint) -> usize {
    let mut best = 0;
    for (j, d) in discs.iter().enumerate().skip(1) {
        if hpot(x, d) < hpot(x, &discs[best]) {
            best = j;
        }
    }
    best
}

pub fn verify(discs: &[HDisc], tiling: &HyperTiling, tol: f64) -> Result<VerifyReport, TilingError> {
    super::owner_map(tiling.cells.iter().map(|c| c.owner), discs.len())?;
    let mut report = VerifyReport::new(discs.len(), tiling.clip_area());

    for (k, cell) in tiling.cells.iter().enumerate() {
        if cell.neighbors.len() != cell.constraints.len() && !cell.neighbors.is_empty() {
            return Ok(report.fail(format!("cell {k} has inconsistent neighbor list")));
        }
        if cell.is_whole() != cell.vertices.is_empty() {
            return Ok(report.fail(format!("cell {k} has a malformed boundary")));
        }
        let n = cell.vertices.len();
        for (v, hv) in cell.vertices.iter().enumerate() {
            if hv.edge.is_some_and(|e| e >= cell.constraints.len()) {
                return Ok(report.fail(format!("cell {k}: edge {v} has no constraint")));
            }
            if hv.ideal != ((hv.klein.norm() - 1.0).abs() <= 1e-9) || hv.klein.norm() > 1.0 + 1e-9 {
                return Ok(report.fail(format!("cell {k}: vertex {v} has a wrong ideal flag")));
            }
            if hv.edge.is_none() && !(hv.ideal && cell.vertices[(v + 1) % n].ideal) {
                return Ok(report.fail(format!("cell {k}: arc {v} joins non-ideal vertices")));
            }
        }
        if n >= 3 {
            for v in 0..n {
                let (a, b, c) = (
                    cell.vertices[v].klein,
                    cell.vertices[(v + 1) % n].klein,
                    cell.vertices[(v + 2) % n].klein,
                );
                if (b - a).cross(c - b) < -tol {
                    return Ok(report.fail(format!("cell {k} is not convex at vertex {}", (v + 1) % n)));
                }
            }
        }
        for (ci, line) in cell.klein_lines().iter().enumerate() {
            if let Some(v) = cell.vertices.iter().position(|hv| line.eval(hv.klein) > tol) {
                return Ok(report.fail(format!("cell {k}: vertex {v} violates constraint {ci}")));
            }
        }
    }

    for (k, cell) in tiling.cells.iter().enumerate() {
        let disc = &discs[cell.owner];
        let o = disc.center.vec();
        for (ci, g) in cell.constraints.iter().enumerate() {
            if g.eval(o) > -disc.radius.sinh() + tol * o.x {
                return Ok(report.fail(format!(
                    "cell {k} does not contain disc {}: constraint {ci} cuts it",
                    cell.owner
                )));
            }
        }
        let inside = discs.iter().filter(|d| cell.contains(d.center, -tol)).count();
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

    report.area_sum = tiling.cells.iter().map(|c| c.area(tiling.clip_radius)).sum();
    report.check_coverage()
}

fn separated(a: &ConvexCellH, b: &ConvexCellH, tol: f64) -> bool {
    let hinted = a
        .neighbors
        .iter()
        .position(|n| *n == Some(b.owner))
        .map(|ci| b.within(&a.constraints[ci].klein_line().flipped(), tol))
        .unwrap_or(false);
    hinted
        || a.klein_lines().iter().any(|l| b.within(&l.flipped(), tol))
        || b.klein_lines().iter().any(|l| a.within(&l.flipped(), tol))
}

/// Geodesic polyline of the cell boundary, for drawing; arcs at infinity
/// are sampled on the unit circle at most `step` apart.
pub fn boundary_samples(cell: &ConvexCellH, step: f64) -> Vec<EPoint> {
    let n = cell.vertices.len();
    let mut out = Vec::new();
    for k in 0..n {
        let v = cell.vertices[k];
        out.push(v.klein);
        if v.edge.is_none() {
            let span = ccw_angle(v.klein, cell.vertices[(k + 1) % n].klein);
            let pieces = ((span / step).ceil() as usize).max(1);
            let a = v.klein.angle();
            for i in 1..pieces {
                out.push(EPoint::from_angle(a + span * i as f64 / pieces as f64));
            }
        }
    }
    if n > 0 {
        out.push(cell.vertices[0].klein);
    }
    out
}
