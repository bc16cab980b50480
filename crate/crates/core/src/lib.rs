//! Separating polygonal tilings for finite disc packings.
//!
//! Every finite packing of circular discs in the Euclidean plane, on the unit
//! sphere (caps smaller than a hemisphere) or in the hyperbolic plane admits a
//! tiling by convex polygons with exactly one disc per tile. The tilings are
//! built as "least potential" diagrams: power diagrams in the plane, and their
//! analogues for the potentials `cos d / cos r` on the sphere and
//! `cosh d / cosh r` in the hyperbolic plane.
//!
//! For convex discs other than circles, [`nonsep`] builds packings of similar
//! copies that admit no such tiling, and certifies the geometric obstruction
//! with small linear programs.

// `!(x > 0.0)` style checks are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod caps;
pub mod cli;
pub mod geom;
pub mod io;
pub mod nonsep;
pub mod tiling;
