//! The small ring polygon the copies are arranged around.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use super::{ConstructionParams, NonsepError};
use crate::geom::EPoint;

/// Side lengths are kept inside `(LOWER·ε, UPPER·ε)`.
const LOWER: f64 = 0.1;
const UPPER: f64 = 0.45;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingPolygon {
    vertices: Vec<EPoint>,
    /// Unsigned exterior angles: `α` at vertices `0..n`, `β` at vertex `n`.
    pub exterior_angles: Vec<f64>,
    /// `side_lengths[k]` is the length of the edge from vertex `k` to `k+1`.
    pub side_lengths: Vec<f64>,
    /// `+1` counterclockwise, `-1` clockwise.
    pub orientation: i8,
}

impl RingPolygon {
    pub fn vertices(&self) -> &[EPoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Unit direction of edge `k`.
    pub fn direction(&self, k: usize) -> EPoint {
        let m = self.vertices.len();
        (self.vertices[(k + 1) % m] - self.vertices[k]).normalized()
    }

    /// `|Σ s_k u_k|` computed from the stored headings.
    pub fn closure_residual(&self) -> f64 {
        let h = headings(&self.exterior_angles, self.orientation);
        let sum = self
            .side_lengths
            .iter()
            .zip(&h)
            .fold(EPoint::default(), |acc, (&s, &phi)| acc + EPoint::from_angle(phi) * s);
        sum.norm()
    }

    /// Signed turning angle at vertex `k`, measured from the vertex loop.
    pub fn measured_exterior_angle(&self, k: usize) -> f64 {
        let m = self.vertices.len();
        let (a, b) = (self.direction((k + m - 1) % m), self.direction(k));
        a.cross(b).atan2(a.dot(b))
    }
}

/// Heading of edge `k`: `φ_0 = 0`, `φ_k = φ_{k-1} + σ·ext_k`.
fn headings(ext: &[f64], orientation: i8) -> Vec<f64> {
    let sigma = orientation as f64;
    let mut phi = Vec::with_capacity(ext.len());
    let mut acc = 0.0;
    phi.push(acc);
    for &e in &ext[1..] {
        acc += sigma * e;
        phi.push(acc);
    }
    phi
}

/// Projects `s` onto `{s : Σ s_k u_k = 0}` in the least-norm sense.
fn project_closed(s: &mut [f64], phi: &[f64]) {
    let (mut gxx, mut gxy, mut gyy, mut rx, mut ry) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&sk, &p) in s.iter().zip(phi) {
        let (y, x) = p.sin_cos();
        gxx += x * x;
        gxy += x * y;
        gyy += y * y;
        rx += sk * x;
        ry += sk * y;
    }
    let det = gxx * gyy - gxy * gxy;
    let lx = (gyy * rx - gxy * ry) / det;
    let ly = (gxx * ry - gxy * rx) / det;
    for (sk, &p) in s.iter_mut().zip(phi) {
        let (y, x) = p.sin_cos();
        *sk -= lx * x + ly * y;
    }
}

/// Side lengths maximizing the distance to the bounds, subject to closure.
fn solve_lp(phi: &[f64], lo: f64, hi: f64) -> Option<Vec<f64>> {
    let mut pb = Problem::new(OptimizationDirection::Maximize);
    let t = pb.add_var(1.0, (f64::NEG_INFINITY, (hi - lo) / 2.0));
    let s: Vec<_> = phi.iter().map(|_| pb.add_var(0.0, (lo, hi))).collect();
    for &v in &s {
        pb.add_constraint([(v, 1.0), (t, -1.0)], ComparisonOp::Ge, lo);
        pb.add_constraint([(v, 1.0), (t, 1.0)], ComparisonOp::Le, hi);
    }
    let cx: Vec<_> = s.iter().zip(phi).map(|(&v, &p)| (v, p.cos())).collect();
    let cy: Vec<_> = s.iter().zip(phi).map(|(&v, &p)| (v, p.sin())).collect();
    pb.add_constraint(cx.as_slice(), ComparisonOp::Eq, 0.0);
    pb.add_constraint(cy.as_slice(), ComparisonOp::Eq, 0.0);
    let sol = pb.solve().ok()?;
    (sol.objective() > 0.0).then(|| s.iter().map(|&v| *sol.var_value(v)).collect())
}

pub fn build_ring_polygon(params: &ConstructionParams) -> Result<RingPolygon, NonsepError> {
    let n = params.n;
    let mut ext = vec![params.alpha; n];
    ext.push(params.beta);
    let phi = headings(&ext, params.orientation);
    let (lo, hi) = (LOWER * params.epsilon, UPPER * params.epsilon);
    let infeasible = || NonsepError::RingInfeasible {
        alpha: params.alpha,
        beta: params.beta,
        n,
    };
    let inside = |s: &[f64]| s.iter().all(|&x| x > lo && x < hi);

    let mut s = vec![0.5 * (lo + hi); n + 1];
    project_closed(&mut s, &phi);
    if !inside(&s) {
        s = solve_lp(&phi, lo, hi).ok_or_else(infeasible)?;
        project_closed(&mut s, &phi);
        if !inside(&s) {
            return Err(infeasible());
        }
    }

    let mut vertices = Vec::with_capacity(n + 1);
    let mut p = EPoint::default();
    for k in 0..=n {
        vertices.push(p);
        p = p + EPoint::from_angle(phi[k]) * s[k];
    }
    Ok(RingPolygon {
        vertices,
        exterior_angles: ext,
        side_lengths: s,
        orientation: params.orientation,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{PI, TAU};

    use super::*;
    use crate::caps::{cap_from_normals, ConvexDisc};
    use crate::nonsep::plan_from_cap;

    fn square_params() -> ConstructionParams {
        let sq = ConvexDisc::new(vec![
            EPoint::new(0.0, 0.0),
            EPoint::new(1.0, 0.0),
            EPoint::new(1.0, 1.0),
            EPoint::new(0.0, 1.0),
        ])
        .unwrap();
        let alpha = 2.0 * 0.5f64.atan();
        let cap = cap_from_normals(&sq, 0.3, 0.3 - (PI - alpha)).unwrap();
        plan_from_cap(&sq, &cap).unwrap()
    }

    #[test]
    fn regular_case_has_equal_sides() {
        let mut p = square_params();
        p.n = 6;
        p.alpha = TAU / 7.0;
        p.beta = TAU / 7.0;
        p.orientation = 1;
        let r = build_ring_polygon(&p).unwrap();
        let s0 = r.side_lengths[0];
        assert!(r.side_lengths.iter().all(|&s| (s - s0).abs() < 1e-15 * p.epsilon.max(1.0)));
        assert!(r.closure_residual() < 1e-15);
    }

    #[test]
    fn square_heptagon() {
        let p = square_params();
        let r = build_ring_polygon(&p).unwrap();
        assert_eq!(r.len(), 7);
        assert!(r.closure_residual() < 1e-9 * p.epsilon);
        assert!(r.side_lengths.iter().all(|&s| s > 1e-6 && s < p.epsilon));
        let sum: f64 = r.exterior_angles.iter().sum();
        assert!((sum - TAU).abs() < 1e-12);
        for k in 0..7 {
            let want = p.orientation as f64 * r.exterior_angles[k];
            assert!((r.measured_exterior_angle(k) - want).abs() < 1e-9);
            let len = r.vertices()[(k + 1) % 7].dist(r.vertices()[k]);
            assert!((len - r.side_lengths[k]).abs() < 1e-12 * p.epsilon);
        }
    }
}
