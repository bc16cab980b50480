//! Convex tilings separating the discs of a packing.
//!
//! Every geometry builds the same kind of object: one convex cell per disc,
//! obtained by clipping the domain with the equipotential half-planes against
//! all other discs. The verifiers re-check the result from scratch.

pub mod euclid;
pub mod hyper;
pub mod sphere;

pub use euclid::{build_power_diagram, BBox, ConvexCellE, EuclidTiling};
pub use hyper::{build_hyperbolic_diagram, ConvexCellH, HVertex, HyperTiling};
pub use sphere::{build_spherical_diagram, ConvexCellS, SphereTiling};

use crate::geom::GeomError;

/// Discs closer than this are rejected before tiling.
pub const MIN_CLEARANCE: f64 = 1e-7;

/// Relative tolerance on the summed cell areas.
pub const COVERAGE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Clip<T> {
    Cell(T),
    Empty,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TilingError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("disc {0} is not inside the domain")]
    OutOfDomain(usize),
    #[error("discs {0} and {1} overlap or touch")]
    Overlap(usize, usize),
    #[error("cell {0} became empty")]
    EmptyCell(usize),
    #[error("no partition for n=1 on sphere")]
    SingleSphereDisc,
    #[error("unbounded")]
    Unbounded,
    #[error("tiling has {cells} cells for {discs} discs")]
    CardinalityMismatch { cells: usize, discs: usize },
    #[error("cell owner {0} is out of range or repeated")]
    BadOwner(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    /// First failed check, if any.
    pub failure: Option<String>,
    pub cells: usize,
    pub area_sum: f64,
    pub domain_area: f64,
}

impl VerifyReport {
    fn new(cells: usize, domain_area: f64) -> Self {
        VerifyReport {
            failure: None,
            cells,
            area_sum: 0.0,
            domain_area,
        }
    }

    fn fail(mut self, msg: String) -> Self {
        self.failure = Some(msg);
        self
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn coverage_error(&self) -> f64 {
        (self.area_sum - self.domain_area).abs() / self.domain_area
    }

    fn check_coverage(self) -> Result<Self, TilingError> {
        let err = self.coverage_error();
        if err > COVERAGE_TOL {
            let msg = format!(
                "coverage: cell areas sum to {} but domain area is {} (relative error {:.3e})",
                self.area_sum, self.domain_area, err
            );
            return Ok(self.fail(msg));
        }
        Ok(self)
    }
}

/// `owner -> cell index`, requiring a bijection onto `0..discs`.
fn owner_map(owners: impl Iterator<Item = usize>, discs: usize) -> Result<Vec<usize>, TilingError> {
    let mut map = vec![usize::MAX; discs];
    let mut cells = 0;
    for (k, o) in owners.enumerate() {
        cells += 1;
        if o >= discs || map[o] != usize::MAX {
            return Err(TilingError::BadOwner(o));
        }
        map[o] = k;
    }
    if cells != discs {
        return Err(TilingError::CardinalityMismatch { cells, discs });
    }
    Ok(map)
}

/// A tiling in any of the three geometries.
#[derive(Debug, Clone, PartialEq)]
pub enum Tiling {
    Euclid(EuclidTiling),
    Sphere(SphereTiling),
    Hyper(HyperTiling),
}

impl Tiling {
    pub fn cell_count(&self) -> usize {
        match self {
            Tiling::Euclid(t) => t.cells.len(),
            Tiling::Sphere(t) => t.cells.len(),
            Tiling::Hyper(t) => t.cells.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn owner_map_requires_bijection() {
        assert_eq!(owner_map([1, 0, 2].into_iter(), 3).unwrap(), vec![1, 0, 2]);
        assert!(matches!(owner_map([0, 0].into_iter(), 2), Err(TilingError::BadOwner(0))));
        assert!(matches!(owner_map([0, 5].into_iter(), 2), Err(TilingError::BadOwner(5))));
        assert!(matches!(
            owner_map([0].into_iter(), 2),
            Err(TilingError::CardinalityMismatch { cells: 1, discs: 2 })
        ));
    }

    #[test]
    fn coverage_check() {
        let mut r = VerifyReport::new(1, 2.0);
        r.area_sum = 2.0 + 1e-7;
        assert!(r.clone().check_coverage().unwrap().passed());
        r.area_sum = 2.0 + 1e-5;
        let r = r.check_coverage().unwrap();
        assert!(r.failure.unwrap().starts_with("coverage"));
    }
}
