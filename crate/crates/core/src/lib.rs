//! Centroid Banach-Mazur distance of planar convex polygons.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: points, affine maps, convex polygons and the queries every
//!   other module relies on (centroid, containment, chords, gauges).
//! - [`hexagon`]: inscribed affine-regular hexagons, the star over a hexagon
//!   and the 4/21 centroid check.
//! - [`normalize`]: canonical position, the fundamental triangles `T`, `T⁺`
//!   and the map `τ`.
//! - [`witness`]: the constructive pipeline that turns a pair of polygons into
//!   a verified witness with ratio at most 69/17.
//! - [`certify`]: numeric certification of the maximisation of `g` over `Q`
//!   and of `f` over `T × T⁺`.
//! - [`estimate`]: upper-bound estimation of the centroid and extended
//!   Banach-Mazur distances for concrete pairs.
//! - [`io`] and [`render`]: JSON formats and SVG figures.

pub mod certify;
pub mod error;
pub mod estimate;
pub mod geometry;
pub mod hexagon;
pub mod io;
pub mod nelder_mead;
pub mod normalize;
pub mod render;
pub mod witness;

pub use error::{Error, Result};
pub use geometry::{random_convex_polygon, AffineMap, ConvexPolygon, Point, Segment};
pub use hexagon::{inscribe_hexagon, AffineRegularHexagon, Star};

/// The universal upper bound on the centroid Banach-Mazur distance of two
/// planar convex bodies.
pub const BOUND: f64 = 69.0 / 17.0;
