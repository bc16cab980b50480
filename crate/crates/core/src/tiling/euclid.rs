//! Power diagrams clipped to a bounding box.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Clip, TilingError, VerifyReport};
use crate::geom::{power, radical_line, EDisc, EPoint, OrientedLineE};

/// Axis-aligned rectangle `[xmin, xmax] × [ymin, ymax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl BBox {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Result<Self, TilingError> {
        if !(xmin < xmax && ymin < ymax) || ![xmin, ymin, xmax, ymax].iter().all(|v| v.is_finite()) {
            return Err(TilingError::InvalidDomain(format!(
                "degenerate bounding box [{xmin}, {ymin}, {xmax}, {ymax}]"
            )));
        }
        Ok(BBox { xmin, ymin, xmax, ymax })
    }

    pub fn unit() -> Self {
        BBox { xmin: 0.0, ymin: 0.0, xmax: 1.0, ymax: 1.0 }
    }

    pub fn area(&self) -> f64 {
        (self.xmax - self.xmin) * (self.ymax - self.ymin)
    }

    /// Counterclockwise corners starting at the lower left.
    pub fn corners(&self) -> Vec<EPoint> {
        vec![
            EPoint::new(self.xmin, self.ymin),
            EPoint::new(self.xmax, self.ymin),
            EPoint::new(self.xmax, self.ymax),
            EPoint::new(self.xmin, self.ymax),
        ]
    }

    pub fn lines(&self) -> [OrientedLineE; 4] {
        [
            OrientedLineE { normal: EPoint::new(0.0, -1.0), offset: -self.ymin },
            OrientedLineE { normal: EPoint::new(1.0, 0.0), offset: self.xmax },
            OrientedLineE { normal: EPoint::new(0.0, 1.0), offset: self.ymax },
            OrientedLineE { normal: EPoint::new(-1.0, 0.0), offset: -self.xmin },
        ]
    }

    pub fn scale(&self) -> f64 {
        (self.xmax - self.xmin).max(self.ymax - self.ymin)
    }

    pub fn contains_disc(&self, d: &EDisc, clearance: f64) -> bool {
        d.center.x - d.radius - self.xmin > clearance
            && self.xmax - d.center.x - d.radius > clearance
            && d.center.y - d.radius - self.ymin > clearance
            && self.ymax - d.center.y - d.radius > clearance
    }
}

/// One tile: the bounding box cut by the radical lines against every other disc.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCellE {
    pub owner: usize,
    pub constraints: Vec<OrientedLineE>,
    /// Disc index each constraint came from; `None` for the bounding box.
    pub neighbors: Vec<Option<usize>>,
    /// Counterclockwise vertex loop.
    pub vertices: Vec<EPoint>,
}

impl ConvexCellE {
    pub fn from_bbox(owner: usize, bbox: &BBox) -> Self {
        ConvexCellE {
            owner,
            constraints: bbox.lines().to_vec(),
            neighbors: vec![None; 4],
            vertices: bbox.corners(),
        }
    }

    /// Intersection with one more half-plane.
    pub fn clipped(&self, line: OrientedLineE, neighbor: Option<usize>) -> Clip<ConvexCellE> {
        let vertices = clip_polygon(&self.vertices, &line);
        if vertices.len() < 3 || polygon_area(&vertices) <= 0.0 {
            return Clip::Empty;
        }
        let mut constraints = self.constraints.clone();
        constraints.push(line);
        let mut neighbors = self.neighbors.clone();
        neighbors.push(neighbor);
        Clip::Cell(ConvexCellE { owner: self.owner, constraints, neighbors, vertices })
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }

    /// Point-in-polygon against the vertex loop.
    pub fn contains(&self, p: EPoint, tol: f64) -> bool {
        let n = self.vertices.len();
        n >= 3
            && (0..n).all(|k| {
                let a = self.vertices[k];
                let b = self.vertices[(k + 1) % n];
                let e = b - a;
                e.cross(p - a) >= -tol * e.norm()
            })
    }
}

/// Sutherland–Hodgman step for a convex counterclockwise polygon.
pub fn clip_polygon(poly: &[EPoint], line: &OrientedLineE) -> Vec<EPoint> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let (da, db) = (line.eval(a), line.eval(b));
        if da <= 0.0 {
            out.push(a);
        }
        if (da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0) {
            out.push(a.lerp(b, da / (da - db)));
        }
    }
    dedup_loop(out)
}

fn dedup_loop(mut pts: Vec<EPoint>) -> Vec<EPoint> {
    let scale = pts.iter().fold(1.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let eps = 1e-14 * scale;
    pts.dedup_by(|b, a| (*a - *b).norm() <= eps);
    while pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() <= eps {
        pts.pop();
    }
    pts
}

/// Signed shoelace area; positive for counterclockwise loops.
pub fn polygon_area(poly: &[EPoint]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let origin = poly[0];
    (1..n - 1)
        .map(|k| (poly[k] - origin).cross(poly[k + 1] - origin))
        .sum::<f64>()
        * 0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct EuclidTiling {
    pub bbox: BBox,
    pub cells: Vec<ConvexCellE>,
}

impl EuclidTiling {
    /// Lowest-index cell containing `p`.
    pub fn locate(&self, p: EPoint, tol: f64) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(p, tol)).map(|k| self.cells[k].owner)
    }
}

pub(super) fn validate(discs: &[EDisc], bbox: &BBox) -> Result<(), TilingError> {
    for (i, d) in discs.iter().enumerate() {
        if !bbox.contains_disc(d, 0.0) {
            return Err(TilingError::OutOfDomain(i));
        }
    }
    for i in 0..discs.len() {
        for j in i + 1..discs.len() {
            if discs[i].clearance(&discs[j]) <= super::MIN_CLEARANCE {
                return Err(TilingError::Overlap(i, j));
            }
        }
    }
    Ok(())
}

/// Clip order for cell `i`: nearest discs first, independent of labels.
fn clip_order(discs: &[EDisc], i: usize) -> Vec<usize> {
    let mut others: Vec<usize> = (0..discs.len()).filter(|&j| j != i).collect();
    let key = |j: usize| {
        let d = &discs[j];
        (discs[i].clearance(d), d.center.x, d.center.y, d.radius)
    };
    others.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    others
}

/// Least-power partition of the box: cell `i` collects the points whose power
/// with respect to disc `i` does not exceed the power to any other disc.
pub fn build_power_diagram(discs: &[EDisc], bbox: BBox) -> Result<EuclidTiling, TilingError> {
    validate(discs, &bbox)?;
    let cells = (0..discs.len())
        .into_par_iter()
        .map(|i| {
            let mut cell = ConvexCellE::from_bbox(i, &bbox);
            for j in clip_order(discs, i) {
                let line = radical_line(&discs[i], &discs[j])?;
                cell = match cell.clipped(line, Some(j)) {
                    Clip::Cell(c) => c,
                    Clip::Empty => return Err(TilingError::EmptyCell(i)),
                };
            }
            Ok(cell)
        })
        .collect::<Result<Vec<_>, TilingError>>()?;
    Ok(EuclidTiling { bbox, cells })
}

/// Index minimizing the power, lowest index on ties.
pub fn argmin_power(discs: &[EDisc], p: EPoint) -> usize {
    let mut best = 0;
    for (j, d) in discs.iter().enumerate().skip(1) {
        if power(p, d) < power(p, &discs[best]) {
            best = j;
        }
    }
    best
}

pub fn verify(discs: &[EDisc], tiling: &EuclidTiling, tol: f64) -> Result<VerifyReport, TilingError> {
    super::owner_map(tiling.cells.iter().map(|c| c.owner), discs.len())?;
    let scale = tiling.bbox.scale();
    let tol_abs = tol * scale;
    let mut report = VerifyReport::new(discs.len(), tiling.bbox.area());

    for (k, cell) in tiling.cells.iter().enumerate() {
        if cell.vertices.len() < 3 || cell.area() <= 0.0 {
            return Ok(report.fail(format!("cell {k} is empty or not counterclockwise")));
        }
        if cell.constraints.len() != cell.neighbors.len() && !cell.neighbors.is_empty() {
            return Ok(report.fail(format!("cell {k} has inconsistent neighbor list")));
        }
        let n = cell.vertices.len();
        for v in 0..n {
            let a = cell.vertices[v];
            let b = cell.vertices[(v + 1) % n];
            let c = cell.vertices[(v + 2) % n];
            if (b - a).cross(c - b) < -tol_abs * scale {
                return Ok(report.fail(format!("cell {k} is not convex at vertex {}", (v + 1) % n)));
            }
        }
        for (ci, line) in cell.constraints.iter().enumerate() {
            if let Some(v) = cell.vertices.iter().position(|&p| line.eval(p) > tol_abs) {
                return Ok(report.fail(format!(
                    "cell {k}: vertex {v} violates constraint {ci} by {:.3e}",
                    line.eval(cell.vertices[v])
                )));
            }
        }
        // the box itself must bound every cell
        for line in tiling.bbox.lines() {
            if cell.vertices.iter().any(|&p| line.eval(p) > tol_abs) {
                return Ok(report.fail(format!("cell {k} leaves the bounding box")));
            }
        }
    }

    for (k, cell) in tiling.cells.iter().enumerate() {
        let disc = &discs[cell.owner];
        for (ci, line) in cell.constraints.iter().enumerate() {
            let slack = line.offset - line.normal.dot(disc.center);
            if slack < disc.radius - tol_abs {
                return Ok(report.fail(format!(
                    "cell {k} does not contain disc {}: constraint {ci} cuts it",
                    cell.owner
                )));
            }
        }
        if !cell.contains(disc.center, tol_abs) {
            return Ok(report.fail(format!("cell {k} does not contain disc {}", cell.owner)));
        }
        let inside = discs.iter().filter(|d| cell.contains(d.center, -tol_abs)).count();
        if inside > 1 {
            return Ok(report.fail(format!("cell {k} contains {inside} discs")));
        }
    }

    for i in 0..tiling.cells.len() {
        for j in i + 1..tiling.cells.len() {
            if !separated(&tiling.cells[i], &tiling.cells[j], tol_abs) {
                return Ok(report.fail(format!("cells {i} and {j} overlap")));
            }
        }
    }

    report.area_sum = tiling.cells.iter().map(ConvexCellE::area).sum();
    report.check_coverage()
}

fn separated(a: &ConvexCellE, b: &ConvexCellE, tol: f64) -> bool {
    let outside = |line: &OrientedLineE, cell: &ConvexCellE| {
        cell.vertices.iter().all(|&p| line.eval(p) >= -tol)
    };
    let hinted = a
        .neighbors
        .iter()
        .position(|n| *n == Some(b.owner))
        .map(|ci| outside(&a.constraints[ci], b))
        .unwrap_or(false);
    hinted
        || a.constraints.iter().any(|l| outside(l, b))
        || b.constraints.iter().any(|l| outside(l, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(x: f64, y: f64, r: f64) -> EDisc {
        EDisc::new(EPoint::new(x, y), r).unwrap()
    }

    #[test]
    fn single_disc_gets_the_box() {
        let bbox = BBox::new(0.0, 0.0, 2.0, 1.0).unwrap();
        let t = build_power_diagram(&[disc(1.0, 0.5, 0.2)], bbox).unwrap();
        assert_eq!(t.cells[0].vertices, bbox.corners());
        assert!(verify(&[disc(1.0, 0.5, 0.2)], &t, 1e-9).unwrap().passed());
    }

    #[test]
    fn two_equal_discs_split_at_the_middle() {
        let bbox = BBox::new(0.0, 0.0, 4.0, 2.0).unwrap();
        let discs = [disc(1.0, 1.0, 0.5), disc(3.0, 1.0, 0.5)];
        let t = build_power_diagram(&discs, bbox).unwrap();
        for (cell, x0) in t.cells.iter().zip([0.0, 2.0]) {
            assert!((cell.area() - 4.0).abs() < 1e-12);
            for v in &cell.vertices {
                assert!((v.x - x0).abs() < 1e-12 || (v.x - x0 - 2.0).abs() < 1e-12);
            }
        }
        assert!(verify(&discs, &t, 1e-9).unwrap().passed());
    }

    #[test]
    fn clip_box_with_half_plane() {
        let cell = ConvexCellE::from_bbox(0, &BBox::new(0.0, 0.0, 4.0, 2.0).unwrap());
        let line = OrientedLineE::new(EPoint::new(1.0, 0.0), 2.0).unwrap();
        let Clip::Cell(left) = cell.clipped(line, None) else { panic!("empty") };
        assert!((left.area() - 4.0).abs() < 1e-12);
        let far = OrientedLineE::new(EPoint::new(1.0, 0.0), -1.0).unwrap();
        assert!(matches!(cell.clipped(far, None), Clip::Empty));
    }

    #[test]
    fn validation_errors() {
        let bbox = BBox::unit();
        assert!(matches!(
            build_power_diagram(&[disc(0.3, 0.5, 0.2), disc(0.6, 0.5, 0.2)], bbox),
            Err(TilingError::Overlap(0, 1))
        ));
        assert!(matches!(
            build_power_diagram(&[disc(0.95, 0.5, 0.1)], bbox),
            Err(TilingError::OutOfDomain(0))
        ));
    }

    #[test]
    fn doubled_cell_is_rejected() {
        let bbox = BBox::new(0.0, 0.0, 4.0, 2.0).unwrap();
        let discs = [disc(1.0, 1.0, 0.5), disc(3.0, 1.0, 0.5)];
        let mut t = build_power_diagram(&discs, bbox).unwrap();
        // cell 1 swallows the whole box, cell 0 keeps its half
        t.cells[1] = ConvexCellE::from_bbox(1, &bbox);
        let report = verify(&discs, &t, 1e-9).unwrap();
        assert_eq!(report.failure.as_deref(), Some("cell 1 contains 2 discs"));
    }
}
