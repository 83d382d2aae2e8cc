//! Constructive witness for the 69/17 bound on a concrete pair of polygons.
//!
//! Both bodies are normalised (centroids `(p, q)` and `(r*, s*)` in `T`), the
//! second one is carried by `τ` so its hexagon becomes the star tips of the
//! canonical hexagon, both centroids are moved to the origin and the second
//! body is enlarged by `ρ = (3 − 2p)/(3 − 2r)`. Then
//! `C′ ⊂ S(H_C′) ⊂ H_D″ ⊂ D″ ⊂ S(H_D″) ⊂ f·C′` with `f = f(p, q, r, s)`.
//! Every link of that chain is checked numerically.

use serde::{Deserialize, Serialize};

use crate::geometry::{AffineMap, ConvexPolygon, Gauge, Point};
use crate::hexagon::{AffineRegularHexagon, Star};
use crate::normalize::{normalize, tau, tau_map, NormalizedBody, DOMAIN_TOL};
use crate::{Error, Result, BOUND};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Default relative tolerance of the containment checks.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-7;
/// Containments failing at this tolerance but passing the requested one are
/// reported as warnings.
pub const STRICT_VERIFY_TOL: f64 = 1e-9;

/// `f(p, q, r, s) = √3(3 − 2p)(3 + r) / ((3 − 2r)(√3 + √3p + q) − (3 − 2p)s)`.
pub fn f_ratio(p: f64, q: f64, r: f64, s: f64) -> Result<f64> {
    let den = (3.0 - 2.0 * r) * (SQRT3 + SQRT3 * p + q) - (3.0 - 2.0 * p) * s;
    if !(den > 0.0) || r >= 1.5 {
        return Err(Error::Domain(format!("f has non-positive denominator at ({p}, {q}, {r}, {s})")));
    }
    Ok(SQRT3 * (3.0 - 2.0 * p) * (3.0 + r) / den)
}

/// Homothety ratio `(3 − 2p)/(3 − 2r)` applied to `D′`.
pub fn enlargement(p: f64, r: f64) -> f64 {
    (3.0 - 2.0 * p) / (3.0 - 2.0 * r)
}

/// Outer star vertex `d̄″₄ = (−(3 − 2p)(3 + r)/(3 − 2r), −(3 − 2p)s/(3 − 2r))`.
pub fn outer_vertex_d4(p: f64, r: f64, s: f64) -> Point {
    let k = (3.0 - 2.0 * p) / (3.0 - 2.0 * r);
    Point::new(-k * (3.0 + r), -k * s)
}

/// Intersection `e` of the line through `c′₃ c′₄` with the horizontal line through `d̄″₄`.
pub fn point_e(p: f64, q: f64, r: f64, s: f64) -> Point {
    let y = -(3.0 - 2.0 * p) * s / (3.0 - 2.0 * r);
    Point::new(SQRT3 / 3.0 * (3.0 - 2.0 * p) * s / (3.0 - 2.0 * r) - 1.0 - p - SQRT3 / 3.0 * q, y)
}

/// `d″₁ = ρ(3/2 − r, √3/2 − s)`.
pub fn point_d1(p: f64, r: f64, s: f64) -> Point {
    Point::new(1.5 - r, 0.5 * SQRT3 - s) * enlargement(p, r)
}

/// `d″₆ = ρ(3/2 − r, −√3/2 − s)`.
pub fn point_d6(p: f64, r: f64, s: f64) -> Point {
    Point::new(1.5 - r, -0.5 * SQRT3 - s) * enlargement(p, r)
}

/// Affine maps `alpha`, `beta` with common centroid `(0, 0)` and
/// `alpha(C) ⊂ beta(D) ⊂ lambda·alpha(C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub alpha: AffineMap,
    pub beta: AffineMap,
    pub lambda: f64,
    /// The roles of the two bodies were exchanged during construction.
    pub swapped: bool,
    /// Optional numerically tightened variant, reported separately from `lambda`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tightened: Option<TightenedWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TightenedWitness {
    pub alpha: AffineMap,
    pub beta: AffineMap,
    pub lambda: f64,
}

/// Outcome of re-checking a witness against the original bodies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    /// Largest centroid displacement from the origin, relative to the diameter.
    pub centroid_offset: f64,
    /// Excess of `alpha(C)` over `beta(D)`, relative to the diameter of `beta(D)`.
    pub inner_excess: f64,
    /// Excess of `beta(D)` over `lambda·alpha(C)`, relative.
    pub outer_excess: f64,
    pub holds: bool,
}

impl Witness {
    pub fn verify(&self, c: &ConvexPolygon, d: &ConvexPolygon, tol: f64) -> Result<WitnessCheck> {
        check_maps(&self.alpha, &self.beta, self.lambda, c, d, tol)
    }
}

fn check_maps(
    alpha: &AffineMap,
    beta: &AffineMap,
    lambda: f64,
    c: &ConvexPolygon,
    d: &ConvexPolygon,
    tol: f64,
) -> Result<WitnessCheck> {
    let ac = alpha.map_polygon(c);
    let bd = beta.map_polygon(d);
    let big = ac.scaled_about(Point::ORIGIN, lambda)?;
    let centroid_offset = (ac.centroid().norm() / ac.diameter()).max(bd.centroid().norm() / bd.diameter());
    let inner_excess = bd.containment_excess(&ac) / bd.diameter();
    let outer_excess = big.containment_excess(&bd) / big.diameter();
    Ok(WitnessCheck {
        centroid_offset,
        inner_excess,
        outer_excess,
        holds: centroid_offset <= 1e-9 && inner_excess <= tol && outer_excess <= tol,
    })
}

/// One link of the containment chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentCheck {
    pub name: String,
    /// Largest relative excess of the inner object over the outer one.
    pub excess: f64,
    pub holds: bool,
    /// The witness depends on this link; a failure aborts the construction.
    /// Other links are intermediate steps, reported but not required.
    pub required: bool,
}

/// Every intermediate object of one construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub swapped: bool,
    /// Normalisation of the body in the `C` role (after a possible swap).
    pub c_normalized: NormalizedBody,
    /// Normalisation of the body in the `D` role.
    pub d_normalized: NormalizedBody,
    pub p: f64,
    pub q: f64,
    pub r_star: f64,
    pub s_star: f64,
    pub r: f64,
    pub s: f64,
    pub rho: f64,
    pub f: f64,
    pub c_prime: ConvexPolygon,
    pub h_c_prime: AffineRegularHexagon,
    pub star_c_prime: Star,
    pub d_prime: ConvexPolygon,
    pub h_d_prime: AffineRegularHexagon,
    pub d_double_prime: ConvexPolygon,
    pub h_d_double_prime: AffineRegularHexagon,
    pub star_d_double_prime: Star,
    pub h_c_double_prime: AffineRegularHexagon,
    pub e: Point,
    pub d4_bar: Point,
    pub checks: Vec<ContainmentCheck>,
    /// Smallest ratio the constructed maps admit (see `WitnessOptions::tighten`).
    pub admitted_ratio: Option<f64>,
    pub warnings: Vec<String>,
}

impl ConstructionTrace {
    /// Intermediate links that did not hold at the construction tolerance.
    pub fn failed_steps(&self) -> impl Iterator<Item = &ContainmentCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// A labelled object of the construction, for rendering and cross-checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Labeled {
    Point { label: String, at: Point },
    Polygon { label: String, vertices: Vec<Point> },
}

/// Named points and outlines of a trace: `C′`, `D″`, the two hexagons and
/// stars, `H_C″`, `d″₁`, `d″₆`, `d̄″₄`, `e`, `o`.
pub fn trace_points(trace: &ConstructionTrace) -> Vec<Labeled> {
    let poly = |label: &str, v: Vec<Point>| Labeled::Polygon { label: label.into(), vertices: v };
    let point = |label: &str, at: Point| Labeled::Point { label: label.into(), at };
    let (p, q, r, s) = (trace.p, trace.q, trace.r, trace.s);
    vec![
        poly("C′", trace.c_prime.vertices().to_vec()),
        poly("D″", trace.d_double_prime.vertices().to_vec()),
        poly("H_C′", trace.h_c_prime.vertices().to_vec()),
        poly("S(H_C′)", trace.star_c_prime.boundary()),
        poly("H_D″", trace.h_d_double_prime.vertices().to_vec()),
        poly("S(H_D″)", trace.star_d_double_prime.boundary()),
        poly("H_C″", trace.h_c_double_prime.vertices().to_vec()),
        point("o", Point::ORIGIN),
        point("d″₁", point_d1(p, r, s)),
        point("d″₆", point_d6(p, r, s)),
        point("c̄′₁", trace.star_c_prime.outer_vertex(1)),
        point("c̄′₆", trace.star_c_prime.outer_vertex(6)),
        point("d̄″₄", outer_vertex_d4(p, r, s)),
        point("e", point_e(p, q, r, s)),
        point("c″₃", trace.h_c_double_prime.vertex(3)),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessOptions {
    /// Relative tolerance of the containment checks.
    pub tol: f64,
    /// Also compute the smallest ratio the constructed maps admit.
    pub tighten: bool,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { tol: DEFAULT_VERIFY_TOL, tighten: false }
    }
}

/// Runs the construction with default options apart from `tol`.
pub fn construct(c: &ConvexPolygon, d: &ConvexPolygon, tol: f64) -> Result<(Witness, ConstructionTrace)> {
    construct_with(c, d, &WitnessOptions { tol, ..WitnessOptions::default() })
}

pub fn construct_with(
    c: &ConvexPolygon,
    d: &ConvexPolygon,
    opts: &WitnessOptions,
) -> Result<(Witness, ConstructionTrace)> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let nc = normalize(c)?;
    let nd = normalize(d)?;
    let swapped = nc.centroid.x > nd.centroid.x;
    let (first, second, body_first, body_second) = if swapped { (nd, nc, d, c) } else { (nc, nd, c, d) };

    let (p, q) = (first.centroid.x, first.centroid.y);
    let (r_star, s_star) = (second.centroid.x, second.centroid.y);
    let rs = tau(second.centroid);
    let (r, s) = (rs.x, rs.y);
    let rho = enlargement(p, r);
    let f = f_ratio(p, q, r, s)?;

    let to_c_prime = AffineMap::translation(Point::new(-p, -q)).compose(&first.to_canonical);
    let to_d_prime = AffineMap::translation(-rs).compose(&tau_map()).compose(&second.to_canonical);
    let to_d_double_prime = AffineMap::scale_about(Point::ORIGIN, rho)?.compose(&to_d_prime);

    let canonical = AffineRegularHexagon::canonical();
    let c_prime = to_c_prime.map_polygon(body_first);
    let h_c_prime = canonical.transformed(&AffineMap::translation(Point::new(-p, -q)));
    let star_c_prime = Star::over(&h_c_prime);
    let d_prime = to_d_prime.map_polygon(body_second);
    let h_d_prime = canonical.transformed(&AffineMap::translation(-rs).compose(&tau_map()));
    let d_double_prime = to_d_double_prime.map_polygon(body_second);
    let h_d_double_prime = h_d_prime.transformed(&AffineMap::scale_about(Point::ORIGIN, rho)?);
    let star_d_double_prime = Star::over(&h_d_double_prime);
    let scale_f = AffineMap::scale_about(Point::ORIGIN, f)?;
    let h_c_double_prime = h_c_prime.transformed(&scale_f);
    let f_c_prime = scale_f.map_polygon(&c_prime);

    // containment chain, each link measured relative to its outer object
    let rel = |outer: &ConvexPolygon, excess: f64| excess / outer.diameter();
    let star_excess = |star: &Star, inner: &ConvexPolygon| -> f64 {
        // smallest tolerance at which the star contains `inner`, by bisection on the predicate
        let scale = star.hexagon().diameter();
        if star.contains_polygon(inner, 0.0) {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, scale);
        if !star.contains_polygon(inner, hi) {
            return f64::INFINITY;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if star.contains_polygon(inner, mid) { hi = mid } else { lo = mid }
        }
        hi / scale
    };
    let outer_points_excess = |outer: &ConvexPolygon, pts: &[Point]| {
        rel(outer, pts.iter().map(|&w| outer.signed_distance(w)).fold(f64::NEG_INFINITY, f64::max))
    };
    let h_d2_poly = h_d_double_prime.to_polygon();
    let h_c2_poly = h_c_double_prime.to_polygon();
    let measured = [
        ("S(H_C′) ⊇ C′", star_excess(&star_c_prime, &c_prime), false),
        ("H_D″ ⊇ S(H_C′)", outer_points_excess(&h_d2_poly, star_c_prime.outer()), false),
        ("D″ ⊇ C′", rel(&d_double_prime, d_double_prime.containment_excess(&c_prime)), true),
        ("S(H_D″) ⊇ D″", star_excess(&star_d_double_prime, &d_double_prime), false),
        ("H_C″ ⊇ S(H_D″)", outer_points_excess(&h_c2_poly, star_d_double_prime.outer()), false),
        ("f·C′ ⊇ S(H_D″)", outer_points_excess(&f_c_prime, star_d_double_prime.outer()), false),
        ("f·C′ ⊇ D″", rel(&f_c_prime, f_c_prime.containment_excess(&d_double_prime)), true),
    ];

    let mut warnings = Vec::new();
    let mut failures = Vec::new();
    let checks: Vec<ContainmentCheck> = measured
        .iter()
        .map(|&(name, excess, required)| {
            let holds = excess <= opts.tol;
            if !holds && required {
                failures.push(format!("{name} fails by {excess:e}"));
            } else if !holds {
                warnings.push(format!("intermediate step {name} fails by {excess:e}"));
            } else if excess > STRICT_VERIFY_TOL {
                warnings.push(format!("{name} holds only at tolerance {excess:e}"));
            }
            ContainmentCheck { name: name.into(), excess, holds, required }
        })
        .collect();
    // q ≥ 0 on T and s ≤ 0 on T⁺, each up to the membership tolerance (scaled by |τ| = √3 for s)
    if q < s - 4.0 * DOMAIN_TOL {
        failures.push(format!("q = {q} < s = {s}"));
    }
    if rho < 1.0 - 1e-12 {
        failures.push(format!("enlargement ratio {rho} < 1"));
    }
    if f > BOUND + 1e-9 {
        failures.push(format!("f = {f} exceeds 69/17"));
    }

    let (alpha, beta) = if swapped {
        (AffineMap::scale_about(Point::ORIGIN, 1.0 / f)?.compose(&to_d_double_prime), to_c_prime)
    } else {
        (to_c_prime, to_d_double_prime)
    };

    let trace = ConstructionTrace {
        swapped,
        c_normalized: first,
        d_normalized: second,
        p,
        q,
        r_star,
        s_star,
        r,
        s,
        rho,
        f,
        c_prime,
        h_c_prime,
        star_c_prime,
        d_prime,
        h_d_prime,
        d_double_prime,
        h_d_double_prime,
        star_d_double_prime,
        h_c_double_prime,
        e: point_e(p, q, r, s),
        d4_bar: outer_vertex_d4(p, r, s),
        checks,
        admitted_ratio: tighten(&alpha, &beta, c, d).ok().map(|t| t.lambda),
        warnings,
    };
    if !failures.is_empty() {
        if let Some(ratio) = trace.admitted_ratio {
            failures.push(format!("the constructed maps admit ratio {ratio}"));
        }
        return Err(Error::ProofViolation { detail: failures.join("; "), trace: Box::new(trace) });
    }

    let tightened = if opts.tighten {
        // keep the original maps when tightening gains nothing beyond rounding
        let t = tighten(&alpha, &beta, c, d)?;
        Some(if t.lambda < f { t } else { TightenedWitness { alpha, beta, lambda: f } })
    } else {
        None
    };
    let witness = Witness { alpha, beta, lambda: f, swapped, tightened };

    let check = witness.verify(c, d, opts.tol)?;
    if !check.holds {
        return Err(Error::ProofViolation {
            detail: format!("composed maps fail re-verification: {check:?}"),
            trace: Box::new(trace),
        });
    }
    Ok((witness, trace))
}

/// Smallest ratio for the constructed maps: shrink `beta(D)` until it touches
/// `alpha(C)`, then take the least homothet of `alpha(C)` containing it. Both
/// steps are exact gauge evaluations.
fn tighten(alpha: &AffineMap, beta: &AffineMap, c: &ConvexPolygon, d: &ConvexPolygon) -> Result<TightenedWitness> {
    let ac = alpha.map_polygon(c);
    let bd = beta.map_polygon(d);
    let shrink = max_gauge(&bd, &ac)?;
    let beta = AffineMap::scale_about(Point::ORIGIN, shrink)?.compose(beta);
    let lambda = max_gauge(&ac, &beta.map_polygon(d))?.max(1.0);
    Ok(TightenedWitness { alpha: *alpha, beta, lambda })
}

/// `max γ_outer(v)` over the vertices of `inner`, gauge about the origin.
fn max_gauge(outer: &ConvexPolygon, inner: &ConvexPolygon) -> Result<f64> {
    let g = Gauge::new(outer, Point::ORIGIN)?;
    Ok(inner.vertices().iter().map(|&v| g.eval(v)).fold(0.0, f64::max))
}
