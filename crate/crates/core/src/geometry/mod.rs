//! Planar convex geometry shared by every other module.

mod affine;
mod point;
mod polygon;
mod random;

pub use affine::AffineMap;
pub use point::{Point, Segment};
pub use polygon::{ConvexPolygon, Gauge};
pub use random::random_convex_polygon;

/// Unit vector at `angle` radians.
pub fn direction(angle: f64) -> Point {
    Point::new(angle.cos(), angle.sin())
}
