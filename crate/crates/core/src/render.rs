//! SVG figures of a witness construction and of the pentagon–triangle pair.

use std::fmt::Write;

use crate::estimate::PentagonTriangle;
use crate::geometry::Point;
use crate::witness::{trace_points, ConstructionTrace, Labeled};

#[derive(Debug, Clone)]
struct Outline {
    label: String,
    points: Vec<Point>,
    stroke: &'static str,
    fill: &'static str,
    dashed: bool,
}

#[derive(Debug, Clone)]
struct Mark {
    label: String,
    at: Point,
}

/// A set of labelled outlines and points in model coordinates (y up).
#[derive(Debug, Clone, Default)]
pub struct Scene {
    outlines: Vec<Outline>,
    marks: Vec<Mark>,
}

const WIDTH: f64 = 800.0;

impl Scene {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn outline(&mut self, label: &str, points: Vec<Point>, stroke: &'static str, fill: &'static str, dashed: bool) {
        self.outlines.push(Outline { label: label.into(), points, stroke, fill, dashed });
    }

    pub fn mark(&mut self, label: &str, at: Point) {
        self.marks.push(Mark { label: label.into(), at });
    }

    fn bounds(&self) -> (Point, Point) {
        let pts = self.outlines.iter().flat_map(|o| o.points.iter()).chain(self.marks.iter().map(|m| &m.at));
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.is_finite() {
            return (Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
        }
        (lo, hi)
    }

    /// SVG with a viewBox fitted to the scene plus a 5% margin; y is flipped.
    pub fn to_svg(&self, title: &str) -> String {
        let (lo, hi) = self.bounds();
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let margin = 0.05 * span;
        let (x0, y0) = (lo.x - margin, -hi.y - margin);
        let (w, h) = (hi.x - lo.x + 2.0 * margin, hi.y - lo.y + 2.0 * margin);
        let unit = span / 400.0;
        let height = WIDTH * h / w;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height:.1}" viewBox="{x0:.6} {y0:.6} {w:.6} {h:.6}">"#
        );
        let _ = writeln!(svg, "<title>{}</title>", escape(title));
        let _ = writeln!(svg, r#"<rect x="{x0:.6}" y="{y0:.6}" width="{w:.6}" height="{h:.6}" fill="white"/>"#);
        for o in &self.outlines {
            let pts: Vec<String> = o.points.iter().map(|p| format!("{:.6},{:.6}", p.x, -p.y)).collect();
            let dash = if o.dashed { format!(r#" stroke-dasharray="{:.6} {:.6}""#, 4.0 * unit, 3.0 * unit) } else { String::new() };
            let _ = writeln!(
                svg,
                r#"<polygon data-label="{}" points="{}" fill="{}" fill-opacity="0.15" stroke="{}" stroke-width="{:.6}"{dash}/>"#,
                escape(&o.label),
                pts.join(" "),
                o.fill,
                o.stroke,
                1.2 * unit
            );
            if let Some(top) = o.points.iter().copied().reduce(|a, b| if b.y > a.y { b } else { a }) {
                let _ = writeln!(
                    svg,
                    r#"<text x="{:.6}" y="{:.6}" font-size="{:.6}" fill="{}">{}</text>"#,
                    top.x + 3.0 * unit,
                    -top.y - 3.0 * unit,
                    11.0 * unit,
                    o.stroke,
                    escape(&o.label)
                );
            }
        }
        for m in &self.marks {
            let _ = writeln!(
                svg,
                r#"<circle data-label="{}" cx="{:.6}" cy="{:.6}" r="{:.6}" fill="black"/>"#,
                escape(&m.label),
                m.at.x,
                -m.at.y,
                2.5 * unit
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.6}" y="{:.6}" font-size="{:.6}">{}</text>"#,
                m.at.x + 4.0 * unit,
                -m.at.y - 4.0 * unit,
                12.0 * unit,
                escape(&m.label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn style(label: &str) -> (&'static str, &'static str, bool) {
    match label {
        "C′" => ("#1f5fbf", "#1f5fbf", false),
        "D″" => ("#c0392b", "#c0392b", false),
        "H_C′" | "H_C″" => ("#1f5fbf", "none", true),
        "H_D″" => ("#c0392b", "none", true),
        "S(H_C′)" => ("#5d8fd8", "none", true),
        "S(H_D″)" => ("#e07b6f", "none", true),
        _ => ("#555555", "none", false),
    }
}

/// Construction diagram: both bodies, their hexagons and stars, the enlarged
/// hexagon and the named points used in the ratio.
pub fn render_trace(trace: &ConstructionTrace) -> String {
    let mut scene = Scene::new();
    for item in trace_points(trace) {
        match item {
            Labeled::Polygon { label, vertices } => {
                let (stroke, fill, dashed) = style(&label);
                scene.outline(&label, vertices, stroke, fill, dashed);
            }
            Labeled::Point { label, at } => scene.mark(&label, at),
        }
    }
    scene.to_svg(&format!("construction with f = {:.6}", trace.f))
}

/// Pentagon `P`, inscribed triangle `T` and the covering triangle `T*`.
pub fn render_pentagon_triangle(pt: &PentagonTriangle) -> String {
    let mut scene = Scene::new();
    scene.outline("P", pt.pentagon.vertices().to_vec(), "#1f5fbf", "#1f5fbf", false);
    scene.outline("T", pt.triangle.vertices().to_vec(), "#c0392b", "#c0392b", false);
    scene.outline("T*", pt.enlarged.vertices().to_vec(), "#c0392b", "none", true);
    scene.mark("o", Point::ORIGIN);
    scene.to_svg(&format!("pentagon and triangle, ratio {:.7}", pt.lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::pentagon_triangle_witness;

    #[test]
    fn pentagon_figure_has_three_outlines() {
        let svg = render_pentagon_triangle(&pentagon_triangle_witness().unwrap());
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polygon").count(), 3);
        assert!(svg.contains(r#"data-label="T*""#));
    }

    #[test]
    fn trace_figure_labels_every_object() {
        let tri = crate::ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap();
        let (_, trace) = crate::witness::construct(&tri, &tri, 1e-7).unwrap();
        let svg = render_trace(&trace);
        for label in ["C′", "D″", "d̄″₄", "e"] {
            assert!(svg.contains(&format!(r#"data-label="{label}""#)), "{label}");
        }
        assert_eq!(svg, render_trace(&trace));
    }

    #[test]
    fn labels_are_escaped() {
        let mut s = Scene::new();
        s.mark("a<b", Point::ORIGIN);
        assert!(s.to_svg("x & y").contains("a&lt;b"));
    }
}
