//! Geometry kernel for the three model spaces.

pub mod euclid;
pub mod hyper;
pub mod sphere;
mod vec3;

pub use euclid::{power, radical_line, EDisc, EPoint, OrientedLineE};
pub use hyper::{
    hbisector, hdist, hpot, hyperboloid_to_poincare, mdot, poincare_to_hyperboloid, GeodesicH,
    HDisc, HPoint,
};
pub use sphere::{
    angular_distance, equipotential_points, sbisector, sphere_foot_of_perpendicular, spot, GreatCircleS,
    SDisc, SPoint,
};
pub use vec3::Vec3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("concentric pair")]
    ConcentricPair,
    #[error("not a packing: discs overlap")]
    NotAPacking,
    #[error("degenerate pair")]
    DegeneratePair,
    #[error("invalid radius {0}")]
    InvalidRadius(f64),
    #[error("vector is not unit (norm {0})")]
    NotUnit(f64),
    #[error("point is not on the hyperboloid (<X,X> = {0})")]
    NotOnHyperboloid(f64),
    #[error("outside model (|p| = {0})")]
    OutsideModel(f64),
    #[error("projection undefined: point is a pole of the great circle")]
    ProjectionUndefined,
    #[error("zero normal vector")]
    ZeroNormal,
}
