use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{direction, AffineMap, Point, Segment};
use crate::{Error, Result};

/// Consecutive vertices closer than this (relative to the diameter) are merged.
const DUPLICATE_TOL: f64 = 1e-12;
/// Turns with `|cross| ≤ COLLINEAR_TOL · diameter²` are treated as straight.
const COLLINEAR_TOL: f64 = 1e-12;
/// Minimum area relative to `diameter²`.
const MIN_AREA: f64 = 1e-18;

/// A convex polygon stored counterclockwise with collinear vertices removed.
///
/// JSON form: `{"vertices": [[x, y], ...]}`. The reader re-validates and
/// re-orients, so clockwise input is accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonJson", into = "PolygonJson")]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct PolygonJson {
    vertices: Vec<Point>,
}

impl TryFrom<PolygonJson> for ConvexPolygon {
    type Error = Error;
    fn try_from(j: PolygonJson) -> Result<Self> {
        ConvexPolygon::new(j.vertices)
    }
}

impl From<ConvexPolygon> for PolygonJson {
    fn from(p: ConvexPolygon) -> Self {
        PolygonJson { vertices: p.vertices }
    }
}

fn max_pairwise_distance(points: &[Point]) -> f64 {
    let mut d = 0.0_f64;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            d = d.max(p.distance(q));
        }
    }
    d
}

impl ConvexPolygon {
    /// Validates a vertex loop: merges duplicates, orients counterclockwise,
    /// drops collinear vertices and rejects non-convex or degenerate input.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidInput(format!("polygon needs at least 3 vertices, got {}", points.len())));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("vertex {i} is not finite")));
        }
        let diam = max_pairwise_distance(&points);
        if diam == 0.0 {
            return Err(Error::Degenerate("all vertices coincide".into()));
        }
        let a = points[0];
        let b = points.iter().copied().max_by(|p, q| a.distance(*p).total_cmp(&a.distance(*q))).unwrap_or(a);
        let spread = points.iter().map(|&p| (p - a).cross(b - a).abs()).fold(0.0, f64::max) / a.distance(b);
        if spread <= COLLINEAR_TOL * diam {
            return Err(Error::Degenerate("vertices are collinear".into()));
        }

        let mut v: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if v.last().is_none_or(|&q: &Point| q.distance(p) > DUPLICATE_TOL * diam) {
                v.push(p);
            }
        }
        while v.len() > 1 && v[0].distance(v[v.len() - 1]) <= DUPLICATE_TOL * diam {
            v.pop();
        }

        if shoelace(&v) < 0.0 {
            v.reverse();
        }

        // Drop straight vertices until none remain; reversals are spikes.
        let eps = COLLINEAR_TOL * diam * diam;
        loop {
            let n = v.len();
            if n < 3 {
                return Err(Error::Degenerate("polygon collapses to a segment".into()));
            }
            let mut removed = false;
            for i in 0..n {
                let prev = v[(i + n - 1) % n];
                let next = v[(i + 1) % n];
                let e0 = v[i] - prev;
                let e1 = next - v[i];
                let cross = e0.cross(e1);
                if cross.abs() <= eps {
                    if e0.dot(e1) < 0.0 {
                        return Err(Error::NotConvex { index: i, cross });
                    }
                    v.remove(i);
                    removed = true;
                    break;
                }
                if cross < 0.0 {
                    return Err(Error::NotConvex { index: i, cross });
                }
            }
            if !removed {
                break;
            }
        }

        // All left turns also holds for self-overlapping loops; the turning
        // number pins down simplicity.
        let n = v.len();
        let turning: f64 = (0..n)
            .map(|i| {
                let e0 = v[(i + 1) % n] - v[i];
                let e1 = v[(i + 2) % n] - v[(i + 1) % n];
                e0.cross(e1).atan2(e0.dot(e1))
            })
            .sum();
        if (turning - TAU).abs() > 1e-6 {
            return Err(Error::NotConvex { index: 0, cross: turning });
        }

        let area = 0.5 * shoelace(&v);
        if area <= MIN_AREA * diam * diam {
            return Err(Error::Degenerate(format!("area {area:e} is negligible")));
        }
        Ok(ConvexPolygon { vertices: v })
    }

    /// Convex hull (Andrew's monotone chain) of a point cloud.
    pub fn hull(points: &[Point]) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("point {i} is not finite")));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::Degenerate("fewer than 3 distinct points".into()));
        }
        let mut lower: Vec<Point> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && (lower[lower.len() - 1] - lower[lower.len() - 2]).cross(p - lower[lower.len() - 1]) <= 0.0 {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && (upper[upper.len() - 1] - upper[upper.len() - 2]).cross(p - upper[upper.len() - 1]) <= 0.0 {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        ConvexPolygon::new(lower)
    }

    /// Wraps a vertex list already known to be a counterclockwise convex loop
    /// (the image of a valid polygon under an orientation-fixed affine map).
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point>) -> Self {
        debug_assert!(vertices.len() >= 3);
        ConvexPolygon { vertices }
    }

    /// Regular `n`-gon with vertices `center + radius·(cos(phase + 2πi/n), sin(…))`.
    pub fn regular(n: usize, center: Point, radius: f64, phase: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("regular polygon needs n ≥ 3, got {n}")));
        }
        let vertices = (0..n)
            .map(|i| center + direction(phase + TAU * i as f64 / n as f64) * radius)
            .collect();
        ConvexPolygon::new(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges `(v_i, v_{i+1})`, counterclockwise.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Signed area; positive for counterclockwise storage.
    pub fn signed_area(&self) -> f64 {
        0.5 * shoelace(&self.vertices)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        // Moments relative to v0 keep cancellation in check for far-off polygons.
        let o = self.vertices[0];
        let mut a2 = 0.0;
        let mut m = Point::ORIGIN;
        for (p, q) in self.edges() {
            let (p, q) = (p - o, q - o);
            let c = p.cross(q);
            a2 += c;
            m += (p + q) * c;
        }
        o + m / (3.0 * a2)
    }

    pub fn diameter(&self) -> f64 {
        max_pairwise_distance(&self.vertices)
    }

    /// `(min, max)` corners of the axis-aligned bounding box.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    /// Support function `h(dir) = max ⟨v, dir⟩`.
    pub fn support(&self, dir: Point) -> f64 {
        self.vertices.iter().map(|v| v.dot(dir)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest outward distance of `pt` to the edge lines. For interior points
    /// this is minus the distance to the boundary; positive means outside.
    pub fn signed_distance(&self, pt: Point) -> f64 {
        self.edges()
            .map(|(a, b)| {
                let e = b - a;
                -(e.cross(pt - a)) / e.norm()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `pt` lies inside or within `tol` outside every edge half-plane.
    /// A negative `tol` demands strict interiority by `|tol|`.
    pub fn contains_point(&self, pt: Point, tol: f64) -> bool {
        self.signed_distance(pt) <= tol
    }

    /// Every vertex of `inner` passes [`contains_point`](Self::contains_point);
    /// sufficient because both operands are convex.
    pub fn contains_polygon(&self, inner: &ConvexPolygon, tol: f64) -> bool {
        inner.vertices.iter().all(|&v| self.contains_point(v, tol))
    }

    /// Largest amount by which any vertex of `inner` sticks out of `self`.
    pub fn containment_excess(&self, inner: &ConvexPolygon) -> f64 {
        inner.vertices.iter().map(|&v| self.signed_distance(v)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Intersection with the line `{x : ⟨x, n(θ)⟩ = t}`, `n(θ) = (−sin θ, cos θ)`,
    /// oriented along `u(θ) = (cos θ, sin θ)`. `None` when the line misses.
    pub fn chord_at(&self, angle: f64, offset: f64) -> Option<Segment> {
        let u = direction(angle);
        let n = u.perp();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in self.edges() {
            let (ta, tb) = (a.dot(n) - offset, b.dot(n) - offset);
            let (sa, sb) = (a.dot(u), b.dot(u));
            if ta == 0.0 {
                lo = lo.min(sa);
                hi = hi.max(sa);
            }
            if ta * tb < 0.0 {
                let s = sa + (sb - sa) * (ta / (ta - tb));
                lo = lo.min(s);
                hi = hi.max(s);
            }
        }
        (lo <= hi).then(|| Segment::new(u * lo + n * offset, u * hi + n * offset))
    }

    /// Distance from an interior `origin` to the boundary along the ray at `angle`.
    pub fn radial_distance(&self, origin: Point, angle: f64) -> Result<f64> {
        if !self.contains_point(origin, -1e-12 * self.diameter()) {
            return Err(Error::NotInterior);
        }
        let dir = direction(angle);
        let mut best = f64::INFINITY;
        for (a, b) in self.edges() {
            let e = b - a;
            let normal = Point::new(e.y, -e.x);
            let along = normal.dot(dir);
            if along > 0.0 {
                best = best.min(normal.dot(a - origin) / along);
            }
        }
        Ok(best)
    }

    pub fn translated(&self, v: Point) -> ConvexPolygon {
        ConvexPolygon::from_ccw_unchecked(self.vertices.iter().map(|&p| p + v).collect())
    }

    /// Homothetic image with positive ratio.
    pub fn scaled_about(&self, center: Point, ratio: f64) -> Result<ConvexPolygon> {
        Ok(AffineMap::scale_about(center, ratio)?.map_polygon(self))
    }
}

fn shoelace(v: &[Point]) -> f64 {
    let n = v.len();
    if n == 0 {
        return 0.0;
    }
    let o = v[0];
    (0..n).map(|i| (v[i] - o).cross(v[(i + 1) % n] - o)).sum()
}

/// Gauge (Minkowski functional) of a convex polygon about an interior point:
/// `γ(x) = min {t ≥ 0 : origin + x ∈ origin + t·(P − origin)}`.
///
/// Holds the edge normals divided by their support offsets, so an evaluation
/// is one pass of dot products.
#[derive(Debug, Clone)]
pub struct Gauge {
    scaled_normals: Vec<Point>,
}

impl Gauge {
    pub fn new(poly: &ConvexPolygon, origin: Point) -> Result<Self> {
        if !poly.contains_point(origin, -1e-12 * poly.diameter()) {
            return Err(Error::NotInterior);
        }
        let scaled_normals = poly
            .edges()
            .map(|(a, b)| {
                let e = b - a;
                let normal = Point::new(e.y, -e.x);
                normal / normal.dot(a - origin)
            })
            .collect();
        Ok(Gauge { scaled_normals })
    }

    /// `γ(x)` for a vector `x` relative to the gauge origin.
    pub fn eval(&self, x: Point) -> f64 {
        self.scaled_normals.iter().map(|a| a.dot(x)).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn triangle() -> ConvexPolygon {
        ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap()
    }

    fn hexagon() -> ConvexPolygon {
        ConvexPolygon::regular(6, Point::ORIGIN, 1.0, 0.0).unwrap()
    }

    #[test]
    fn centroids() {
        let c = unit_square().centroid();
        assert_abs_diff_eq!(c.x, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.y, 0.5, epsilon = 1e-15);
        let c = triangle().centroid();
        assert_abs_diff_eq!(c.x, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.y, 1.0 / 3.0, epsilon = 1e-15);
        let c = hexagon().centroid();
        assert_abs_diff_eq!(c.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.y, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn areas() {
        assert_abs_diff_eq!(unit_square().area(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(triangle().area(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(hexagon().area(), 2.598076211353316, epsilon = 1e-12);
    }

    #[test]
    fn construction_normalises_input() {
        // clockwise, with a duplicate and a collinear midpoint
        let p = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.5),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.signed_area() > 0.0);
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(ConvexPolygon::new(vec![Point::ORIGIN, Point::new(1.0, 0.0)]), Err(Error::InvalidInput(_))));
        assert!(matches!(
            ConvexPolygon::new(vec![Point::ORIGIN, Point::new(1.0, 0.0), Point::new(2.0, 0.0)]),
            Err(Error::Degenerate(_))
        ));
        let dart = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(0.0, 2.0),
            Point::new(0.5, 1.0),
        ];
        assert!(matches!(ConvexPolygon::new(dart), Err(Error::NotConvex { .. })));
        let pentagram: Vec<Point> = (0..5).map(|i| direction(4.0 * PI * i as f64 / 5.0)).collect();
        assert!(ConvexPolygon::new(pentagram).is_err());
        assert!(ConvexPolygon::new(vec![Point::ORIGIN, Point::new(f64::NAN, 0.0), Point::new(0.0, 1.0)]).is_err());
    }

    #[test]
    fn point_containment() {
        let sq = unit_square();
        assert!(sq.contains_point(Point::new(0.5, 0.5), 0.0));
        assert!(sq.contains_point(Point::new(1.000001, 0.5), 1e-3));
        assert!(!sq.contains_point(Point::new(1.000001, 0.5), 1e-9));
        assert!(!sq.contains_point(Point::new(2.0, 2.0), 1e-9));
    }

    #[test]
    fn polygon_containment() {
        let sq = unit_square();
        let big = sq.scaled_about(Point::new(0.5, 0.5), 2.0).unwrap();
        assert!(big.contains_polygon(&sq, 0.0));
        assert!(!sq.contains_polygon(&big, 1e-9));
    }

    #[test]
    fn chords() {
        let s = unit_square().chord_at(0.0, 0.5).unwrap();
        assert_abs_diff_eq!(s.a.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.b.x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.length(), 1.0, epsilon = 1e-15);
        assert!(unit_square().chord_at(0.0, 2.0).is_none());
        let s = triangle().chord_at(0.0, 0.5).unwrap();
        assert_abs_diff_eq!(s.a.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.b.x, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.a.y, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.length(), 0.5, epsilon = 1e-15);
        // chord along an edge
        let s = unit_square().chord_at(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(s.length(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn radial_distances() {
        let h = hexagon();
        assert_abs_diff_eq!(h.radial_distance(Point::ORIGIN, 0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.radial_distance(Point::ORIGIN, PI / 6.0).unwrap(), 0.8660254037844386, epsilon = 1e-15);
        assert_abs_diff_eq!(unit_square().radial_distance(Point::new(0.5, 0.5), 0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert!(matches!(unit_square().radial_distance(Point::new(1.0, 0.5), 0.0), Err(Error::NotInterior)));
    }

    #[test]
    fn gauge_matches_radial_distance() {
        let h = hexagon();
        let g = Gauge::new(&h, Point::ORIGIN).unwrap();
        for k in 0..32 {
            let a = k as f64 * 0.2;
            let r = h.radial_distance(Point::ORIGIN, a).unwrap();
            assert_abs_diff_eq!(g.eval(direction(a) * 3.0), 3.0 / r, epsilon = 1e-13);
        }
    }

    #[test]
    fn hull_of_square_with_interior_points() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(0.5, 0.5),
            Point::new(1.0, 0.0),
            Point::new(0.2, 0.7),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let h = ConvexPolygon::hull(&pts).unwrap();
        assert_eq!(h.len(), 4);
        assert_abs_diff_eq!(h.area(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn json_round_trip_and_reorientation() {
        let cw = r#"{"vertices":[[0,0],[0,1],[1,0]]}"#;
        let p: ConvexPolygon = serde_json::from_str(cw).unwrap();
        assert!(p.signed_area() > 0.0);
        let s = serde_json::to_string(&p).unwrap();
        let q: ConvexPolygon = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&q).unwrap(), s);
        assert!(serde_json::from_str::<ConvexPolygon>(r#"{"vertices":[[0,0],[1,0]]}"#).is_err());
    }
}
