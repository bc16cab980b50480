//! Documents, random packings and figures.

pub mod gen;
pub mod json;
pub mod svg;

pub use gen::{gen_random_packing, GenParams};
pub use json::{
    emit_packing, emit_tiling, parse_packing, parse_polygon, parse_tiling, Geometry, Meta, Packing, PackingDocument,
    PolygonDisc, TilingDocument,
};
pub use svg::{render_polygon_packing, render_svg, SvgOptions};

use crate::tiling::{self, Tiling, TilingError, VerifyReport};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("invalid UTF-8: {0}")]
    Utf8(#[from] std::str::Utf8Error),
    #[error("{}: {message}", if path.is_empty() { "/" } else { path.as_str() })]
    Schema { path: String, message: String },
    #[error("not a packing: discs {0} and {1} overlap (clearance {2:e})")]
    Overlap(usize, usize, f64),
    #[error("packing generation failed after {0} rejections")]
    GenerationFailed(usize),
    #[error("{0}")]
    Invalid(String),
}


impl Packing {
    /// Least-potential tiling of the packing; `clip_radius` only matters in
    /// the hyperbolic plane.
    pub fn tile(&self, clip_radius: Option<f64>) -> Result<Tiling, TilingError> {
        Ok(match self {
            Packing::Euclid { discs, bbox } => Tiling::Euclid(tiling::build_power_diagram(discs, *bbox)?),
            Packing::Sphere(d) => Tiling::Sphere(tiling::build_spherical_diagram(d)?),
            Packing::Hyper(d) => Tiling::Hyper(tiling::build_hyperbolic_diagram(d, clip_radius)?),
        })
    }

    pub fn verify(&self, t: &Tiling, tol: f64) -> Result<VerifyReport, TilingError> {
        match (self, t) {
            (Packing::Euclid { discs, .. }, Tiling::Euclid(t)) => tiling::euclid::verify(discs, t, tol),
            (Packing::Sphere(d), Tiling::Sphere(t)) => tiling::sphere::verify(d, t, tol),
            (Packing::Hyper(d), Tiling::Hyper(t)) => tiling::hyper::verify(d, t, tol),
            _ => Err(TilingError::InvalidDomain("packing and tiling geometries differ".into())),
        }
    }
}
