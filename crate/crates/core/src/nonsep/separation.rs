//! Separating lines between consecutive copies, decided by small LPs.
//!
//! A line `a·x = c` with `|a|∞ <= 1` separates `D1` from `D2` with margin `t`
//! when `a·p <= c - t` on `D1` and `a·q >= c + t` on `D2`. Between two
//! consecutive copies the ring always ends up strictly on the side of the
//! second copy; the certificate asks for a separating line that leaves some
//! ring vertex on the side of the first copy instead and expects none.

use std::f64::consts::TAU;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::ConvexDisc;
use crate::geom::EPoint;

/// Where the ring is required to lie relative to the separating line.
#[derive(Debug, Clone, Copy)]
enum RingSide<'a> {
    Free,
    /// This point weakly on the side of `D1`.
    PointWithFirst(EPoint),
    /// All these points on the side of the first / second disc, with margin.
    AllWithFirst(&'a [EPoint]),
    AllWithSecond(&'a [EPoint]),
}

/// Optimal separation margin `t*` under the ring condition.
fn max_margin(d1: &[EPoint], d2: &[EPoint], ring: RingSide) -> f64 {
    let mut pb = Problem::new(OptimizationDirection::Maximize);
    let t = pb.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    let ax = pb.add_var(0.0, (-1.0, 1.0));
    let ay = pb.add_var(0.0, (-1.0, 1.0));
    let c = pb.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    for p in d1 {
        pb.add_constraint([(ax, p.x), (ay, p.y), (c, -1.0), (t, 1.0)], ComparisonOp::Le, 0.0);
    }
    for q in d2 {
        pb.add_constraint([(ax, q.x), (ay, q.y), (c, -1.0), (t, -1.0)], ComparisonOp::Ge, 0.0);
    }
    match ring {
        RingSide::Free => {}
        RingSide::PointWithFirst(r) => {
            pb.add_constraint([(ax, r.x), (ay, r.y), (c, -1.0)], ComparisonOp::Le, 0.0);
        }
        RingSide::AllWithFirst(rs) => {
            for r in rs {
                pb.add_constraint([(ax, r.x), (ay, r.y), (c, -1.0), (t, 1.0)], ComparisonOp::Le, 0.0);
            }
        }
        RingSide::AllWithSecond(rs) => {
            for r in rs {
                pb.add_constraint([(ax, r.x), (ay, r.y), (c, -1.0), (t, -1.0)], ComparisonOp::Ge, 0.0);
            }
        }
    }
    match pb.solve() {
        Ok(sol) => sol.objective(),
        Err(_) => f64::NEG_INFINITY,
    }
}

fn scale_of(sets: &[&[EPoint]]) -> f64 {
    let pts = sets.iter().flat_map(|s| s.iter());
    let (lo, hi) = pts.fold(
        (EPoint::new(f64::MAX, f64::MAX), EPoint::new(f64::MIN, f64::MIN)),
        |(lo, hi), p| (EPoint::new(lo.x.min(p.x), lo.y.min(p.y)), EPoint::new(hi.x.max(p.x), hi.y.max(p.y))),
    );
    lo.dist(hi).max(f64::MIN_POSITIVE)
}

/// Feasibility threshold `δ` for the margin.
pub fn margin_threshold(d1: &[EPoint], d2: &[EPoint], ring: &[EPoint]) -> f64 {
    1e-9 * scale_of(&[d1, d2, ring])
}

/// Best margin of a line separating `d1` from `d2` with at least one ring
/// vertex weakly on the side of `d1`; without a ring, plain separation.
pub fn separation_margin(d1: &[EPoint], d2: &[EPoint], ring: &[EPoint]) -> f64 {
    if ring.is_empty() {
        return max_margin(d1, d2, RingSide::Free);
    }
    ring.iter()
        .map(|&r| max_margin(d1, d2, RingSide::PointWithFirst(r)))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Whether some line strictly separates `d1` from `d2` without leaving the
/// whole ring on the side of `d2`.
pub fn separating_line_feasible(d1: &[EPoint], d2: &[EPoint], ring: &[EPoint]) -> bool {
    separation_margin(d1, d2, ring) >= margin_threshold(d1, d2, ring)
}

/// Whether some line strictly separates `d1` from `d2` and misses the ring,
/// with the ring on either side.
pub fn line_avoiding_ring_exists(d1: &[EPoint], d2: &[EPoint], ring: &[EPoint]) -> bool {
    let delta = margin_threshold(d1, d2, ring);
    max_margin(d1, d2, RingSide::AllWithFirst(ring)) >= delta
        || max_margin(d1, d2, RingSide::AllWithSecond(ring)) >= delta
}

/// Brute-force search over `angles × offsets` lines `u·x = c` for one that
/// separates with the given clearance and has a ring vertex on the side of `d1`.
pub fn sampled_separating_line(
    d1: &[EPoint],
    d2: &[EPoint],
    ring: &[EPoint],
    angles: usize,
    offsets: usize,
    clearance: f64,
) -> bool {
    (0..angles).any(|i| {
        let u = EPoint::from_angle(TAU * i as f64 / angles as f64);
        let hi1 = d1.iter().map(|&p| u.dot(p)).fold(f64::MIN, f64::max);
        let lo2 = d2.iter().map(|&q| u.dot(q)).fold(f64::MAX, f64::min);
        let (from, to) = (hi1 + clearance, lo2 - clearance);
        if to < from {
            return false;
        }
        let rmin = ring.iter().map(|&r| u.dot(r)).fold(f64::MAX, f64::min);
        (0..offsets).any(|j| {
            let c = from + (to - from) * j as f64 / (offsets.max(2) - 1) as f64;
            ring.is_empty() || rmin <= c
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub pair: [usize; 2],
    /// Whether a separating line keeps a ring vertex on the first disc's side.
    pub feasible: bool,
    pub margin: f64,
    /// Whether a separating line misses the ring entirely.
    pub avoiding_line: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub pass: bool,
    pub threshold: f64,
    pub pairs: Vec<PairVerdict>,
    pub scope: String,
}

/// Checks all cyclically consecutive pairs `(k, k+1)`.
pub fn certify_nonseparable(discs: &[ConvexDisc], ring: &[EPoint]) -> Certificate {
    let m = discs.len();
    let pairs: Vec<PairVerdict> = (0..m)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (discs[k].vertices(), discs[(k + 1) % m].vertices());
            let margin = separation_margin(a, b, ring);
            PairVerdict {
                pair: [k, (k + 1) % m],
                feasible: margin >= margin_threshold(a, b, ring),
                margin,
                avoiding_line: line_avoiding_ring_exists(a, b, ring),
            }
        })
        .collect();
    let threshold = pairs
        .iter()
        .map(|p| margin_threshold(discs[p.pair[0]].vertices(), discs[p.pair[1]].vertices(), ring))
        .fold(0.0, f64::max);
    Certificate {
        pass: m >= 2 && pairs.iter().all(|p| !p.feasible),
        threshold,
        pairs,
        scope: "every line separating consecutive discs leaves the ring polygon on the side of the \
                later disc; this certifies that obstruction, not the absence of a separating tiling"
            .to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_at(x: f64, y: f64) -> Vec<EPoint> {
        vec![
            EPoint::new(x, y),
            EPoint::new(x + 1.0, y),
            EPoint::new(x + 1.0, y + 1.0),
            EPoint::new(x, y + 1.0),
        ]
    }

    #[test]
    fn far_apart_squares() {
        let (a, b) = (square_at(0.0, 0.0), square_at(5.0, 0.0));
        let ring = vec![EPoint::new(2.5, 40.0), EPoint::new(2.6, 40.0), EPoint::new(2.55, 40.1)];
        assert!(separating_line_feasible(&a, &b, &ring));
        assert!(line_avoiding_ring_exists(&a, &b, &ring));
        assert!((separation_margin(&a, &b, &[]) - 2.0).abs() < 1e-9);
        assert!(sampled_separating_line(&a, &b, &ring, 720, 400, 1e-6));
    }

    #[test]
    fn ring_beyond_the_second_disc() {
        // the ring sits right behind the second square, so every separating
        // line keeps it on the far side
        let a = square_at(0.0, 0.0);
        let b = vec![EPoint::new(2.0, -10.0), EPoint::new(3.0, -10.0), EPoint::new(3.0, 11.0), EPoint::new(2.0, 11.0)];
        let ring = vec![EPoint::new(3.5, 0.4), EPoint::new(3.6, 0.4), EPoint::new(3.55, 0.6)];
        assert!(!separating_line_feasible(&a, &b, &ring));
        assert!(!sampled_separating_line(&a, &b, &ring, 720, 400, 1e-6));
        assert!(line_avoiding_ring_exists(&a, &b, &ring));
    }

    #[test]
    fn overlapping_discs_are_not_separable() {
        let (a, b) = (square_at(0.0, 0.0), square_at(0.5, 0.5));
        assert!(!separating_line_feasible(&a, &b, &[]));
    }
}
