use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ConvexPolygon, Point};
use crate::{Error, Result};

/// Convex hull of `n` points drawn uniformly from the unit disk.
///
/// Deterministic per `(n, seed)`; the result has at most `n` vertices.
pub fn random_convex_polygon(n: usize, seed: u64) -> Result<ConvexPolygon> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("random polygon needs n ≥ 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                let r = rng.random::<f64>().sqrt();
                let phi = TAU * rng.random::<f64>();
                Point::new(r * phi.cos(), r * phi.sin())
            })
            .collect();
        // Nearly collinear draws are rejected by the hull; redraw.
        if let Ok(poly) = ConvexPolygon::hull(&pts) {
            if poly.area() > 1e-6 {
                return Ok(poly);
            }
        }
    }
}
