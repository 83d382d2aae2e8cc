//! Canonical position: the inscribed hexagon becomes the regular hexagon with
//! vertices `c_i = (cos 60i°, sin 60i°)` and the centroid is moved into the
//! fundamental triangle `T` by a symmetry of that hexagon.

use std::f64::consts::FRAC_PI_3;

use serde::{Deserialize, Serialize};

use crate::geometry::{direction, AffineMap, ConvexPolygon, Point};
use crate::hexagon::{inscribe_hexagon, AffineRegularHexagon, DEFAULT_INSCRIBE_TOL};
use crate::{Error, Result};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Absolute membership tolerance for `T` and `T⁺`.
pub const DOMAIN_TOL: f64 = 1e-12;
/// Largest sector violation still accepted when no symmetry lands the
/// centroid in `T` within [`DOMAIN_TOL`].
const SECTOR_SLACK: f64 = 1e-9;
/// Absolute distance of a canonical hexagon vertex to the normalised body's boundary.
const CANONICAL_BOUNDARY_TOL: f64 = 1e-8;

/// The triangles `T`, `T⁺` and the rectangle `Q = [0, 4/21] × [0, 2/7]`.
pub struct FundamentalDomains;

impl FundamentalDomains {
    /// `(0, 0)`, `(4/21, 0)`, `(1/7, √3/21)`: the part of the 4/21-homothet
    /// of the canonical hexagon between the rays at 0° and 30°.
    pub fn t() -> [Point; 3] {
        [Point::ORIGIN, Point::new(4.0 / 21.0, 0.0), Point::new(1.0 / 7.0, SQRT3 / 21.0)]
    }

    /// `(0, 0)`, `(2/7, −2√3/21)`, `(2/7, 0)`.
    pub fn t_plus() -> [Point; 3] {
        [Point::ORIGIN, Point::new(2.0 / 7.0, -2.0 * SQRT3 / 21.0), Point::new(2.0 / 7.0, 0.0)]
    }

    /// `(p_max, r_max)` of the rectangle `Q`.
    pub fn q() -> (f64, f64) {
        (4.0 / 21.0, 2.0 / 7.0)
    }

    /// Re-derives `τ(T) = T⁺` vertexwise.
    pub fn validate() -> Result<()> {
        let t = Self::t();
        let tp = Self::t_plus();
        // τ sends T's vertices (0, 4/21 on the axis, apex) to (0, T⁺ bottom, T⁺ right)
        for (a, b) in t.iter().zip(tp.iter()) {
            let img = tau(*a);
            if img.distance(*b) > 1e-15 {
                return Err(Error::Numeric(format!("τ({a:?}) = {img:?}, expected {b:?}")));
            }
        }
        Ok(())
    }
}

fn in_triangle(tri: &[Point; 3], pt: Point, tol: f64) -> bool {
    violation(tri, pt) <= tol
}

/// Largest outward distance of `pt` past the edges of a counterclockwise triangle.
fn violation(tri: &[Point; 3], pt: Point) -> f64 {
    (0..3)
        .map(|i| {
            let (a, b) = (tri[i], tri[(i + 1) % 3]);
            let e = b - a;
            e.cross(a - pt) / e.norm()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn in_triangle_t(pt: Point) -> bool {
    in_triangle(&FundamentalDomains::t(), pt, DOMAIN_TOL)
}

pub fn in_triangle_t_plus(pt: Point) -> bool {
    in_triangle(&FundamentalDomains::t_plus(), pt, DOMAIN_TOL)
}

/// `τ(x) = √3 · Rot(−30°) x`.
pub fn tau(pt: Point) -> Point {
    Point::new(1.5 * pt.x + 0.5 * SQRT3 * pt.y, -0.5 * SQRT3 * pt.x + 1.5 * pt.y)
}

pub fn tau_map() -> AffineMap {
    AffineMap::linear(1.5, 0.5 * SQRT3, -0.5 * SQRT3, 1.5).expect("det 3")
}

/// Vertex `c_i = (cos 60i°, sin 60i°)` of the canonical hexagon, 1-based.
pub fn canonical_vertex(i: i64) -> Point {
    direction(FRAC_PI_3 * i.rem_euclid(6) as f64)
}

/// One of the twelve linear symmetries of the canonical hexagon: indices
/// `0..6` rotate by `60k°`, indices `6..12` reflect across the line at
/// `30(k − 6)°`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct SymmetryElement(u8);

impl TryFrom<u8> for SymmetryElement {
    type Error = Error;
    fn try_from(index: u8) -> Result<Self> {
        SymmetryElement::new(index)
    }
}

impl From<SymmetryElement> for u8 {
    fn from(g: SymmetryElement) -> u8 {
        g.0
    }
}

impl SymmetryElement {
    pub fn new(index: u8) -> Result<Self> {
        if index < 12 {
            Ok(SymmetryElement(index))
        } else {
            Err(Error::InvalidInput(format!("symmetry index must be < 12, got {index}")))
        }
    }

    pub fn all() -> impl Iterator<Item = SymmetryElement> {
        (0..12).map(SymmetryElement)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn is_reflection(self) -> bool {
        self.0 >= 6
    }

    pub fn matrix(self) -> [[f64; 2]; 2] {
        if self.0 < 6 {
            let (s, c) = (FRAC_PI_3 * self.0 as f64).sin_cos();
            [[c, -s], [s, c]]
        } else {
            // reflection across the line at angle φ = 30°(k − 6)
            let (s, c) = (FRAC_PI_3 * (self.0 - 6) as f64).sin_cos();
            [[c, s], [s, -c]]
        }
    }

    pub fn map(self) -> AffineMap {
        let [[a, b], [c, d]] = self.matrix();
        AffineMap::linear(a, b, c, d).expect("orthogonal")
    }
}

/// A body in canonical position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedBody {
    /// The body after `to_canonical`.
    pub body: ConvexPolygon,
    /// Original coordinates to canonical ones.
    pub to_canonical: AffineMap,
    /// Centroid of `body`; lies in `T`.
    pub centroid: Point,
    /// Symmetry applied after mapping the hexagon onto the canonical one.
    pub symmetry: SymmetryElement,
    /// The inscribed hexagon found in the original body.
    pub hexagon: AffineRegularHexagon,
}

/// Inscribes a hexagon and normalises with it.
pub fn normalize(poly: &ConvexPolygon) -> Result<NormalizedBody> {
    let hex = inscribe_hexagon(poly, DEFAULT_INSCRIBE_TOL)?;
    normalize_with_hexagon(poly, &hex)
}

/// Normalises `poly` using a given inscribed hexagon.
pub fn normalize_with_hexagon(poly: &ConvexPolygon, hex: &AffineRegularHexagon) -> Result<NormalizedBody> {
    let o = hex.center();
    let (a, b) = (hex.vertex(1) - o, hex.vertex(2) - o);
    let (c1, c2) = (canonical_vertex(1), canonical_vertex(2));
    // L [a b] = [c1 c2]  ⇒  L = [c1 c2] [a b]⁻¹
    let det = a.cross(b);
    if det.abs() <= 1e-300 {
        return Err(Error::Degenerate("inscribed hexagon is flat".into()));
    }
    let inv = [[b.y / det, -b.x / det], [-a.y / det, a.x / det]];
    let m = |r: [f64; 2]| [r[0] * inv[0][0] + r[1] * inv[1][0], r[0] * inv[0][1] + r[1] * inv[1][1]];
    let [m11, m12] = m([c1.x, c2.x]);
    let [m21, m22] = m([c1.y, c2.y]);
    let linear = AffineMap::linear(m11, m12, m21, m22)?;
    let to_hex = linear.compose(&AffineMap::translation(-o));

    for i in 1..=6 {
        let img = to_hex.map_point(hex.vertex(i));
        if img.distance(canonical_vertex(i)) > 1e-9 {
            return Err(Error::Numeric(format!("hexagon vertex {i} maps to {img:?}, not onto c{i}")));
        }
    }

    let centroid = to_hex.map_point(poly.centroid());
    let t = FundamentalDomains::t();
    let image = |g: SymmetryElement| g.map().map_point(centroid);
    let symmetry = match SymmetryElement::all().find(|&g| in_triangle(&t, image(g), DOMAIN_TOL)) {
        Some(g) => g,
        None => {
            let (g, v) = SymmetryElement::all()
                .map(|g| (g, violation(&t, image(g))))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .expect("twelve elements");
            if v > SECTOR_SLACK {
                return Err(Error::LemmaViolation(format!(
                    "no symmetry places the centroid {centroid:?} in T (best miss {v:e})"
                )));
            }
            g
        }
    };

    let to_canonical = symmetry.map().compose(&to_hex);
    let body = to_canonical.map_polygon(poly);
    for i in 1..=6 {
        let d = body.signed_distance(canonical_vertex(i));
        if d.abs() > CANONICAL_BOUNDARY_TOL {
            return Err(Error::Numeric(format!("canonical vertex c{i} is {d:e} off the normalised boundary")));
        }
    }
    Ok(NormalizedBody { body, to_canonical, centroid: symmetry.map().map_point(centroid), symmetry, hexagon: *hex })
}
