use serde::{Deserialize, Serialize};

use super::{ConvexPolygon, Point};
use crate::{Error, Result};

/// Smallest admissible `|det|` of the linear part.
const MIN_DET: f64 = 1e-12;

/// An invertible affine map `x ↦ M·x + t` of the plane.
///
/// Serialised as `{"matrix": [m11, m12, m21, m22], "translation": [tx, ty]}`
/// with the matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AffineMapJson", into = "AffineMapJson")]
pub struct AffineMap {
    m11: f64,
    m12: f64,
    m21: f64,
    m22: f64,
    tx: f64,
    ty: f64,
}

#[derive(Serialize, Deserialize)]
struct AffineMapJson {
    matrix: [f64; 4],
    translation: [f64; 2],
}

impl TryFrom<AffineMapJson> for AffineMap {
    type Error = Error;

    fn try_from(j: AffineMapJson) -> Result<Self> {
        let [m11, m12, m21, m22] = j.matrix;
        let [tx, ty] = j.translation;
        AffineMap::new(m11, m12, m21, m22, tx, ty)
    }
}

impl From<AffineMap> for AffineMapJson {
    fn from(a: AffineMap) -> Self {
        AffineMapJson {
            matrix: [a.m11, a.m12, a.m21, a.m22],
            translation: [a.tx, a.ty],
        }
    }
}

impl AffineMap {
    pub fn new(m11: f64, m12: f64, m21: f64, m22: f64, tx: f64, ty: f64) -> Result<Self> {
        let map = AffineMap { m11, m12, m21, m22, tx, ty };
        if ![m11, m12, m21, m22, tx, ty].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("affine map has non-finite entries".into()));
        }
        let det = map.det();
        if det.abs() <= MIN_DET {
            return Err(Error::SingularMap { det });
        }
        Ok(map)
    }

    /// Linear map with zero translation.
    pub fn linear(m11: f64, m12: f64, m21: f64, m22: f64) -> Result<Self> {
        Self::new(m11, m12, m21, m22, 0.0, 0.0)
    }

    pub fn identity() -> Self {
        AffineMap { m11: 1.0, m12: 0.0, m21: 0.0, m22: 1.0, tx: 0.0, ty: 0.0 }
    }

    pub fn translation(v: Point) -> Self {
        AffineMap { tx: v.x, ty: v.y, ..Self::identity() }
    }

    /// Counterclockwise rotation about the origin.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        AffineMap { m11: c, m12: -s, m21: s, m22: c, tx: 0.0, ty: 0.0 }
    }

    /// Homothety `h_λ` with the given center and ratio.
    pub fn scale_about(center: Point, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::InvalidInput(format!("homothety ratio must be positive, got {ratio}")));
        }
        let t = center * (1.0 - ratio);
        Self::new(ratio, 0.0, 0.0, ratio, t.x, t.y)
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Row-major linear part.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.m11, self.m12], [self.m21, self.m22]]
    }

    pub fn translation_part(&self) -> Point {
        Point::new(self.tx, self.ty)
    }

    pub fn map_vector(&self, v: Point) -> Point {
        Point::new(self.m11 * v.x + self.m12 * v.y, self.m21 * v.x + self.m22 * v.y)
    }

    pub fn map_point(&self, p: Point) -> Point {
        self.map_vector(p) + self.translation_part()
    }

    /// Image of a convex polygon. Orientation-reversing maps have their vertex
    /// order reversed so the result is stored counterclockwise again.
    pub fn map_polygon(&self, poly: &ConvexPolygon) -> ConvexPolygon {
        let mut vertices: Vec<Point> = poly.vertices().iter().map(|&v| self.map_point(v)).collect();
        if self.det() < 0.0 {
            vertices.reverse();
        }
        ConvexPolygon::from_ccw_unchecked(vertices)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let t = self.map_point(other.translation_part());
        AffineMap {
            m11: self.m11 * other.m11 + self.m12 * other.m21,
            m12: self.m11 * other.m12 + self.m12 * other.m22,
            m21: self.m21 * other.m11 + self.m22 * other.m21,
            m22: self.m21 * other.m12 + self.m22 * other.m22,
            tx: t.x,
            ty: t.y,
        }
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        let det = self.det();
        if det.abs() <= MIN_DET || !det.is_finite() {
            return Err(Error::SingularMap { det });
        }
        let inv = AffineMap {
            m11: self.m22 / det,
            m12: -self.m12 / det,
            m21: -self.m21 / det,
            m22: self.m11 / det,
            tx: 0.0,
            ty: 0.0,
        };
        let t = inv.map_vector(self.translation_part());
        Ok(AffineMap { tx: -t.x, ty: -t.y, ..inv })
    }

    /// Largest absolute entry difference against another map.
    pub fn max_abs_diff(&self, other: &AffineMap) -> f64 {
        [
            self.m11 - other.m11,
            self.m12 - other.m12,
            self.m21 - other.m21,
            self.m22 - other.m22,
            self.tx - other.tx,
            self.ty - other.ty,
        ]
        .iter()
        .fold(0.0_f64, |m, d| m.max(d.abs()))
    }
}
