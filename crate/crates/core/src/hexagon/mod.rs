//! Affine-regular hexagons inscribed in convex polygons, the star over a
//! hexagon, and the 4/21 centroid check.

mod inscribe;

use serde::{Deserialize, Serialize};

pub use inscribe::{inscribe_hexagon, DEFAULT_INSCRIBE_TOL};

use crate::geometry::{direction, AffineMap, ConvexPolygon, Point};
use crate::{Error, Result};

/// Ratio of the homothet of an inscribed hexagon that contains the body's centroid.
pub const CENTROID_RATIO: f64 = 4.0 / 21.0;

/// Relative tolerance on the defining identities.
const IDENTITY_TOL: f64 = 1e-9;

/// A non-degenerate affine image of the regular hexagon, vertices
/// counterclockwise, satisfying `v_i + v_{i+3} = 2o` and
/// `v_{i+1} − v_i = v_{i+2} − o` (indices mod 6).
///
/// Vertex `i` (1-based) corresponds to `(cos 60i°, sin 60i°)` of the
/// canonical hexagon; `vertices()[0]` is `v1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HexagonJson", into = "HexagonJson")]
pub struct AffineRegularHexagon {
    center: Point,
    vertices: [Point; 6],
}

#[derive(Serialize, Deserialize)]
struct HexagonJson {
    center: Point,
    vertices: [Point; 6],
}

impl TryFrom<HexagonJson> for AffineRegularHexagon {
    type Error = Error;
    fn try_from(j: HexagonJson) -> Result<Self> {
        AffineRegularHexagon::new(j.center, j.vertices)
    }
}

impl From<AffineRegularHexagon> for HexagonJson {
    fn from(h: AffineRegularHexagon) -> Self {
        HexagonJson { center: h.center, vertices: h.vertices }
    }
}

impl AffineRegularHexagon {
    /// Validates both identities and non-degeneracy relative to the diameter.
    pub fn new(center: Point, vertices: [Point; 6]) -> Result<Self> {
        if !center.is_finite() || vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("hexagon has non-finite coordinates".into()));
        }
        let hex = AffineRegularHexagon { center, vertices };
        let diam = hex.diameter();
        let (sym, reg) = hex.identity_residuals();
        if !(diam > 0.0) || sym > IDENTITY_TOL * diam || reg > IDENTITY_TOL * diam {
            return Err(Error::InvalidInput(format!(
                "not an affine-regular hexagon (symmetry residual {sym:e}, regularity residual {reg:e})"
            )));
        }
        if hex.signed_area() <= 1e-12 * diam * diam {
            return Err(Error::Degenerate("hexagon is degenerate or clockwise".into()));
        }
        Ok(hex)
    }

    /// Hexagon with center `o` and vertices `o + 2X`, `o ± X ± Y` arranged so
    /// that `(X, Y) = ((1/2, 0), (0, √3/2))` gives the canonical hexagon.
    /// `X × Y > 0` yields counterclockwise order.
    pub fn from_axes(center: Point, x: Point, y: Point) -> Self {
        let o = center;
        AffineRegularHexagon {
            center: o,
            vertices: [o + x + y, o - x + y, o - x * 2.0, o - x - y, o + x - y, o + x * 2.0],
        }
    }

    /// Regular hexagon with vertices `(cos 60i°, sin 60i°)`, `i = 1..6`.
    pub fn canonical() -> Self {
        let vertices = std::array::from_fn(|i| direction(std::f64::consts::FRAC_PI_3 * (i + 1) as f64));
        AffineRegularHexagon { center: Point::ORIGIN, vertices }
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn vertices(&self) -> &[Point; 6] {
        &self.vertices
    }

    /// `v_i` with 1-based, cyclic indexing.
    pub fn vertex(&self, i: i64) -> Point {
        self.vertices[(i - 1).rem_euclid(6) as usize]
    }

    pub fn diameter(&self) -> f64 {
        (0..3).map(|i| self.vertices[i].distance(self.vertices[i + 3])).fold(0.0, f64::max)
    }

    fn signed_area(&self) -> f64 {
        (0..6)
            .map(|i| (self.vertices[i] - self.center).cross(self.vertices[(i + 1) % 6] - self.center))
            .sum::<f64>()
            * 0.5
    }

    /// Absolute residuals `(max |v_i + v_{i+3} − 2o|, max |v_{i+1} − v_i − (v_{i+2} − o)|)`.
    pub fn identity_residuals(&self) -> (f64, f64) {
        let o = self.center;
        let sym = (1..=3).map(|i| (self.vertex(i) + self.vertex(i + 3) - o * 2.0).norm()).fold(0.0, f64::max);
        let reg = (1..=6)
            .map(|i| (self.vertex(i + 1) - self.vertex(i) - (self.vertex(i + 2) - o)).norm())
            .fold(0.0, f64::max);
        (sym, reg)
    }

    pub fn to_polygon(&self) -> ConvexPolygon {
        ConvexPolygon::from_ccw_unchecked(self.vertices.to_vec())
    }

    /// Image under an affine map; labels run backwards after a reflection so the
    /// result stays counterclockwise (the identities survive the relabelling).
    pub fn transformed(&self, map: &AffineMap) -> Self {
        let mapped = self.vertices.map(|v| map.map_point(v));
        let vertices = if map.det() < 0.0 { std::array::from_fn(|i| mapped[(11 - i) % 6]) } else { mapped };
        AffineRegularHexagon { center: map.map_point(self.center), vertices }
    }

    /// Homothet about the hexagon's own center.
    pub fn scaled(&self, ratio: f64) -> Self {
        let o = self.center;
        AffineRegularHexagon { center: o, vertices: self.vertices.map(|v| o + (v - o) * ratio) }
    }

    /// Distance from the center to the nearest side.
    pub fn inradius(&self) -> f64 {
        -self.to_polygon().signed_distance(self.center)
    }
}

/// Residual diagnostics of an inscribed hexagon, relative to the body diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexagonResiduals {
    pub symmetry: f64,
    pub regularity: f64,
    /// Largest distance of a vertex to the body's boundary.
    pub boundary: f64,
    /// Largest amount a vertex sticks out of the body (≤ 0 when inside).
    pub outside: f64,
}

impl HexagonResiduals {
    pub fn measure(poly: &ConvexPolygon, hex: &AffineRegularHexagon) -> Self {
        let diam = poly.diameter();
        let (sym, reg) = hex.identity_residuals();
        let dists: Vec<f64> = hex.vertices().iter().map(|&v| poly.signed_distance(v)).collect();
        HexagonResiduals {
            symmetry: sym / diam,
            regularity: reg / diam,
            boundary: dists.iter().fold(0.0_f64, |m, d| m.max(d.abs())) / diam,
            outside: dists.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d)) / diam,
        }
    }

    pub fn max(&self) -> f64 {
        self.symmetry.max(self.regularity).max(self.boundary)
    }
}

/// The star (hexagram) over an affine-regular hexagon: the union of the two
/// triangles cut out by prolonging alternate sides. Outer vertex `w_i` sits
/// beyond side `v_{i−1} v_i` and equals `v_{i−1} + v_i − o`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Star {
    hexagon: AffineRegularHexagon,
    outer: [Point; 6],
}

impl Star {
    pub fn over(hexagon: &AffineRegularHexagon) -> Self {
        let o = hexagon.center();
        let outer = std::array::from_fn(|k| {
            let i = k as i64 + 1;
            hexagon.vertex(i - 1) + hexagon.vertex(i) - o
        });
        Star { hexagon: *hexagon, outer }
    }

    pub fn hexagon(&self) -> &AffineRegularHexagon {
        &self.hexagon
    }

    /// `w_1..w_6`.
    pub fn outer(&self) -> &[Point; 6] {
        &self.outer
    }

    /// `w_i`, 1-based and cyclic.
    pub fn outer_vertex(&self, i: i64) -> Point {
        self.outer[(i - 1).rem_euclid(6) as usize]
    }

    /// Triangles `w1 w3 w5` and `w2 w4 w6`.
    pub fn triangles(&self) -> (ConvexPolygon, ConvexPolygon) {
        let w = &self.outer;
        (
            ConvexPolygon::from_ccw_unchecked(vec![w[0], w[2], w[4]]),
            ConvexPolygon::from_ccw_unchecked(vec![w[1], w[3], w[5]]),
        )
    }

    /// Non-convex boundary loop `v6 w1 v1 w2 v2 … w6`.
    pub fn boundary(&self) -> Vec<Point> {
        (0..6).flat_map(|k| [self.hexagon.vertex(k as i64), self.outer[k]]).collect()
    }

    pub fn contains_point(&self, pt: Point, tol: f64) -> bool {
        let (a, b) = self.triangles();
        a.contains_point(pt, tol) || b.contains_point(pt, tol)
    }

    /// Containment of a convex polygon in the (non-convex) star. Each edge of
    /// `inner` is cut at the six triangle side lines; membership is constant on
    /// every piece, so testing piece endpoints and midpoints is exact.
    pub fn contains_polygon(&self, inner: &ConvexPolygon, tol: f64) -> bool {
        let (a, b) = self.triangles();
        let lines: Vec<(Point, Point)> = a.edges().chain(b.edges()).collect();
        inner.edges().all(|(p, q)| {
            let d = q - p;
            let mut cuts = vec![0.0, 1.0];
            for &(s, e) in &lines {
                let dir = e - s;
                let denom = d.cross(dir);
                if denom.abs() > 1e-300 {
                    let t = (s - p).cross(dir) / denom;
                    if t > 0.0 && t < 1.0 {
                        cuts.push(t);
                    }
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.windows(2).all(|w| {
                let mid = p.lerp(q, 0.5 * (w[0] + w[1]));
                self.contains_point(p.lerp(q, w[0]), tol) && self.contains_point(mid, tol)
            }) && self.contains_point(q, tol)
        })
    }

    /// All twelve boundary vertices as a convex hull test target for convex
    /// outer bodies: the star lies inside a convex set iff its outer vertices do.
    pub fn inside(&self, outer: &ConvexPolygon, tol: f64) -> bool {
        self.outer.iter().all(|&w| outer.contains_point(w, tol))
    }

    pub fn transformed(&self, map: &AffineMap) -> Self {
        Star::over(&self.hexagon.transformed(map))
    }
}

/// Outcome of the 4/21 centroid check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    /// Centroid lies in the 4/21-homothet of the hexagon about its center.
    pub holds: bool,
    /// Signed distance of the centroid to that homothet's boundary; negative inside.
    pub margin: f64,
    /// The hexagon lies in the body (re-verified).
    pub inscribed: bool,
}

/// Checks that the centroid of `poly` lies in `(4/21)·hex` about the hexagon's center.
pub fn check_centroid_lemma(poly: &ConvexPolygon, hex: &AffineRegularHexagon) -> LemmaCheck {
    let diam = poly.diameter();
    let small = hex.scaled(CENTROID_RATIO).to_polygon();
    let c = poly.centroid();
    LemmaCheck {
        holds: small.contains_point(c, 1e-9 * diam),
        margin: small.signed_distance(c),
        inscribed: poly.contains_polygon(&hex.to_polygon(), 1e-9 * diam),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    const SQRT3: f64 = 1.7320508075688772;

    #[test]
    fn canonical_satisfies_identities() {
        let h = AffineRegularHexagon::canonical();
        let (s, r) = h.identity_residuals();
        assert!(s < 1e-15 && r < 1e-15);
        assert_abs_diff_eq!(h.vertex(6).x, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.vertex(1).y, SQRT3 / 2.0, epsilon = 1e-15);
        assert!(AffineRegularHexagon::new(h.center(), *h.vertices()).is_ok());
        assert_eq!(
            AffineRegularHexagon::from_axes(Point::ORIGIN, Point::new(0.5, 0.0), Point::new(0.0, SQRT3 / 2.0))
                .vertices()
                .map(|v| (v.x * 1e12).round()),
            h.vertices().map(|v| (v.x * 1e12).round())
        );
    }

    #[test]
    fn rejects_non_regular_hexagons() {
        let mut v = *AffineRegularHexagon::canonical().vertices();
        v[0].x += 0.01;
        assert!(AffineRegularHexagon::new(Point::ORIGIN, v).is_err());
        let mut cw = *AffineRegularHexagon::canonical().vertices();
        cw.reverse();
        assert!(AffineRegularHexagon::new(Point::ORIGIN, cw).is_err());
    }

    #[test]
    fn canonical_star_outer_vertices() {
        let star = Star::over(&AffineRegularHexagon::canonical());
        let w1 = star.outer_vertex(1);
        assert_abs_diff_eq!(w1.x, 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w1.y, SQRT3 / 2.0, epsilon = 1e-15);
        for (k, w) in star.outer().iter().enumerate() {
            let i = (k + 1) as f64;
            let expected = direction(PI / 3.0 * i - PI / 6.0) * SQRT3;
            assert_abs_diff_eq!(w.norm(), SQRT3, epsilon = 1e-15);
            assert_abs_diff_eq!(w.x, expected.x, epsilon = 1e-14);
            assert_abs_diff_eq!(w.y, expected.y, epsilon = 1e-14);
        }
    }

    #[test]
    fn star_scales_with_hexagon() {
        let h = AffineRegularHexagon::canonical();
        let s1 = Star::over(&h);
        let s2 = Star::over(&h.scaled(2.0));
        for (a, b) in s1.outer().iter().zip(s2.outer()) {
            assert_abs_diff_eq!(a.x * 2.0, b.x, epsilon = 1e-15);
            assert_abs_diff_eq!(a.y * 2.0, b.y, epsilon = 1e-15);
        }
    }

    #[test]
    fn star_membership() {
        let star = Star::over(&AffineRegularHexagon::canonical());
        // (1.2, 0) points at the notch at v6 = (1, 0): both triangles stop at x = 1 there.
        assert!(!star.contains_point(Point::new(1.2, 0.0), 1e-12));
        assert!(star.contains_point(direction(PI / 6.0) * 1.2, 1e-12));
        assert!(!star.contains_point(direction(PI / 6.0) * (SQRT3 + 0.01), 1e-12));
        for &v in star.hexagon().vertices() {
            assert!(star.contains_point(v, 1e-12));
        }
        assert_eq!(star.boundary().len(), 12);
    }

    #[test]
    fn star_rejects_polygon_crossing_a_notch() {
        let star = Star::over(&AffineRegularHexagon::canonical());
        assert!(star.contains_polygon(&star.hexagon().to_polygon(), 1e-12));
        // vertices sit inside the star points, but the edges cut across the notches
        let ring = ConvexPolygon::regular(6, Point::ORIGIN, 1.5, PI / 6.0).unwrap();
        assert!(ring.vertices().iter().all(|&v| star.contains_point(v, 1e-12)));
        assert!(!star.contains_polygon(&ring, 1e-12));
    }

    #[test]
    fn lemma_on_equilateral_triangle() {
        let tri = ConvexPolygon::regular(3, Point::ORIGIN, 1.0, PI / 2.0).unwrap();
        let v = tri.vertices();
        // third-point hexagon
        let pts: Vec<Point> = (0..3)
            .flat_map(|i| {
                let (a, b) = (v[i], v[(i + 1) % 3]);
                [a.lerp(b, 1.0 / 3.0), a.lerp(b, 2.0 / 3.0)]
            })
            .collect();
        let o = tri.centroid();
        let x = (pts[0] - pts[1]) * 0.5;
        let y = pts[0] - o - x;
        let guess = AffineRegularHexagon::from_axes(o, x, y);
        let (s, r) = guess.identity_residuals();
        assert!(s < 1e-14 && r < 1e-14);
        let check = check_centroid_lemma(&tri, &guess);
        assert!(check.holds && check.inscribed);
        assert_abs_diff_eq!(check.margin, -CENTROID_RATIO * guess.inradius(), epsilon = 1e-14);
    }

    #[test]
    fn lemma_on_hexagon_itself() {
        let h = AffineRegularHexagon::canonical();
        let check = check_centroid_lemma(&h.to_polygon(), &h);
        assert!(check.holds && check.inscribed);
        assert!(check.margin < 0.0);
    }

    #[test]
    fn reflection_preserves_identities() {
        let h = AffineRegularHexagon::canonical();
        let m = AffineMap::new(1.0, 0.3, 0.2, -2.0, 0.5, 1.0).unwrap();
        let t = h.transformed(&m);
        let (s, r) = t.identity_residuals();
        assert!(s < 1e-14 && r < 1e-14);
        assert!(AffineRegularHexagon::new(t.center(), *t.vertices()).is_ok());
    }
}
