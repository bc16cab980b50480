//! Packings of similar copies of a non-circular convex disc that no polygonal
//! tiling separates.
//!
//! A non-isosceles cap `EPF` (with `|EP| > |FP|`) of angle `α` is copied `n`
//! times around a small ring polygon whose exterior angles are `α` (n times)
//! and `β = 2π − nα`; a scaled copy with an isosceles cap of angle `β` fills
//! the last corner. Consecutive copies then touch the line through their
//! shared ring edge from opposite sides, and every line separating them
//! leaves the ring on the same side.

mod place;
mod ring;
mod separation;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

pub use place::{place_copies, polygon_distance, polygon_gap, PlacedDisc};
pub use ring::{build_ring_polygon, RingPolygon};
pub use separation::{
    certify_nonseparable, line_avoiding_ring_exists, sampled_separating_line, separating_line_feasible,
    separation_margin, Certificate, PairVerdict,
};

use crate::caps::{find_isosceles_cap, find_non_isosceles_cap_on, Cap, CapError, CapGrid, ConvexDisc};

/// `β` below this is treated as zero.
pub const MIN_BETA: f64 = 1e-3;
/// Relative side difference below which a disc counts as circular.
pub const CIRCULAR_MARGIN: f64 = 1e-3;

/// Grid shifts tried in turn when a cap leads to a degenerate construction.
const GRID_OFFSETS: [f64; 8] = [0.0, 0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NonsepError {
    #[error("disc too circular")]
    TooCircular,
    #[error("beta = {0} is too small")]
    BetaDegenerate(f64),
    #[error("ring infeasible (alpha = {alpha}, beta = {beta}, n = {n})")]
    RingInfeasible { alpha: f64, beta: f64, n: usize },
    #[error("construction overlap between discs {0} and {1}, penetration depth {2:e}")]
    Overlap(usize, usize, f64),
    #[error("no admissible cap after {0} attempts")]
    Exhausted(usize),
    #[error(transparent)]
    Cap(#[from] CapError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    /// Non-isosceles cap with `side1 = |EP| > side2 = |FP|`.
    pub cap: Cap,
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub epsilon: f64,
    /// Scale of the disc carrying the isosceles `β` cap.
    pub scale: f64,
    /// Isosceles cap of angle `β` of the unscaled disc.
    pub beta_cap: Cap,
    /// `+1` when the cap turns counterclockwise from `F` to `E`, else `-1`.
    pub orientation: i8,
}

impl ConstructionParams {
    /// Side length of the scaled `β` cap.
    pub fn beta_side(&self) -> f64 {
        self.scale * 0.5 * (self.beta_cap.side1 + self.beta_cap.side2)
    }
}

/// Parameters from a given non-isosceles cap.
pub fn plan_from_cap(disc: &ConvexDisc, cap: &Cap) -> Result<ConstructionParams, NonsepError> {
    let cap = if cap.side1 >= cap.side2 { *cap } else { cap.swapped() };
    if cap.side1 - cap.side2 <= CIRCULAR_MARGIN * (cap.side1 + cap.side2) {
        return Err(NonsepError::TooCircular);
    }
    let alpha = cap.angle;
    let n = (TAU / alpha).floor() as usize;
    let beta = TAU - n as f64 * alpha;
    if beta <= MIN_BETA {
        return Err(NonsepError::BetaDegenerate(beta));
    }
    let (ep, fp) = (cap.side1, cap.side2);
    let epsilon = (ep - fp) / 2.0;
    let beta_cap = find_isosceles_cap(disc, beta, 1e-9)?;
    let target = (fp + ep - epsilon) / 2.0;
    let scale = target / (0.5 * (beta_cap.side1 + beta_cap.side2));
    let turn = (cap.contact2 - cap.apex).cross(cap.contact1 - cap.apex);
    Ok(ConstructionParams {
        cap,
        alpha,
        beta,
        n,
        epsilon,
        scale,
        beta_cap,
        orientation: if turn >= 0.0 { 1 } else { -1 },
    })
}

/// Plans from the non-isosceles cap found on a grid shifted by `offset`.
pub fn plan_with_offset(disc: &ConvexDisc, offset: f64) -> Result<ConstructionParams, NonsepError> {
    let grid = CapGrid {
        offset,
        ..CapGrid::default()
    };
    let cap = find_non_isosceles_cap_on(disc, CIRCULAR_MARGIN, &grid).ok_or(NonsepError::TooCircular)?;
    plan_from_cap(disc, &cap)
}

/// Plans a construction, re-seeding the cap search while `β` degenerates.
pub fn plan_construction(disc: &ConvexDisc) -> Result<ConstructionParams, NonsepError> {
    let mut last = NonsepError::Exhausted(0);
    for &offset in &GRID_OFFSETS {
        match plan_with_offset(disc, offset) {
            Ok(p) => return Ok(p),
            Err(NonsepError::BetaDegenerate(b)) => last = NonsepError::BetaDegenerate(b),
            Err(e) => return Err(e),
        }
    }
    Err(match last {
        NonsepError::BetaDegenerate(_) => NonsepError::Exhausted(GRID_OFFSETS.len()),
        e => e,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub base: ConvexDisc,
    pub params: ConstructionParams,
    pub ring: RingPolygon,
    /// `n` congruent copies in ring order, then the scaled copy.
    pub copies: Vec<PlacedDisc>,
}

impl Construction {
    pub fn polygons(&self) -> Vec<&ConvexDisc> {
        self.copies.iter().map(|c| &c.disc).collect()
    }
}

/// Plans, builds the ring and places the copies; caps that lead to an
/// infeasible ring or overlapping copies are replaced by the next grid seed.
pub fn build_construction(disc: &ConvexDisc) -> Result<Construction, NonsepError> {
    let mut last = NonsepError::Exhausted(0);
    for &offset in &GRID_OFFSETS {
        let attempt = plan_with_offset(disc, offset).and_then(|params| {
            let ring = build_ring_polygon(&params)?;
            let copies = place_copies(disc, &params, &ring)?;
            Ok(Construction {
                base: disc.clone(),
                params,
                ring,
                copies,
            })
        });
        match attempt {
            Ok(c) => return Ok(c),
            Err(e @ NonsepError::TooCircular) | Err(e @ NonsepError::Cap(_)) => return Err(e),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Full pipeline: construction plus certificate.
pub fn counterexample(disc: &ConvexDisc) -> Result<(Construction, Certificate), NonsepError> {
    let c = build_construction(disc)?;
    let polys: Vec<ConvexDisc> = c.copies.iter().map(|p| p.disc.clone()).collect();
    let cert = certify_nonseparable(&polys, c.ring.vertices());
    Ok((c, cert))
}
