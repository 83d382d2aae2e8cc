//! Upper-bound estimation of Banach-Mazur distances between concrete polygons.
//!
//! The linear part is searched over `L = Rot(α)·diag(σ, 1/σ)·Rot(β)`, both
//! as is and composed with a reflection of `C`. For a fixed `L` the best
//! scale and translations are closed-form (centroid mode) or two small LPs
//! (extended mode). A coarse grid picks seeds for simplex refinement.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{AffineMap, ConvexPolygon, Gauge, Point};
use crate::nelder_mead;
use crate::{Error, Result};

/// Relative tolerance of the final verification pass.
pub const ESTIMATE_VERIFY_TOL: f64 = 1e-9;

/// Seeds refined after the grid pass.
const SEEDS: usize = 12;
/// Simplex iterations per restart; restarts continue until the budget is spent.
const ROUND: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Centroids of the two bodies are pinned together.
    Cen,
    /// Free translations.
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    Low,
    Default,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub n_alpha: usize,
    pub n_sigma: usize,
    pub n_beta: usize,
    /// σ ranges over `[1/sigma_max, sigma_max]`, log-uniformly.
    pub sigma_max: f64,
    pub refine_iters: usize,
    pub mode: Mode,
}

impl EstimatorConfig {
    pub fn new(budget: Budget, mode: Mode) -> Self {
        let (n_alpha, n_sigma, n_beta, refine_iters) = match budget {
            Budget::Low => (24, 12, 24, 150),
            Budget::Default => (48, 24, 48, 300),
            Budget::High => (96, 48, 96, 1000),
        };
        EstimatorConfig { n_alpha, n_sigma, n_beta, sigma_max: 6.0, refine_iters, mode }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_alpha < 4 || self.n_sigma < 4 || self.n_beta < 4 {
            return Err(Error::InvalidInput("grid counts must be at least 4".into()));
        }
        if !(self.sigma_max > 1.0) || !self.sigma_max.is_finite() {
            return Err(Error::InvalidInput(format!("sigma_max must exceed 1, got {}", self.sigma_max)));
        }
        Ok(())
    }
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig::new(Budget::Default, Mode::Cen)
    }
}

/// `best_map(C) ⊆ D ⊆ outer_map(C)`, where `outer_map` is `best_map` followed
/// by a homothety of ratio `lambda_hat` (about `cen(D)` in centroid mode).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub lambda_hat: f64,
    pub best_map: AffineMap,
    /// Scale factor applied to the unit-determinant linear part in `best_map`.
    pub inner_scale: f64,
    pub outer_map: AffineMap,
    pub reflected: bool,
    pub mode: Mode,
    pub verified: bool,
}

/// Polygon in isotropic position (centroid at the origin, identity second
/// moments), with cached gauge and edge normals. Searching from isotropic
/// position makes the grid see affine images of a body alike.
struct Body {
    center: Point,
    /// Whitening map `x ↦ W·(x − center)` and its inverse.
    white: Mat,
    white_inv: Mat,
    verts: Vec<Point>,
    gauge: Gauge,
    /// Outward normals with support values about the centroid.
    facets: Vec<(Point, f64)>,
}

impl Body {
    fn new(poly: &ConvexPolygon, reflect: bool) -> Result<Self> {
        let center = poly.centroid();
        let (white, white_inv) = whitening(poly);
        let verts: Vec<Point> = poly
            .vertices()
            .iter()
            .map(|&v| {
                let w = mul(&white, v - center);
                if reflect { Point::new(w.x, -w.y) } else { w }
            })
            .collect();
        let centred = ConvexPolygon::hull(&verts)?;
        let gauge = Gauge::new(&centred, Point::ORIGIN)?;
        let facets = centred
            .edges()
            .map(|(a, b)| {
                let e = b - a;
                let n = Point::new(e.y, -e.x) / e.norm();
                (n, n.dot(a))
            })
            .collect();
        Ok(Body { center, white, white_inv, verts, gauge, facets })
    }
}

type Mat = [[f64; 2]; 2];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_inv(m: &Mat) -> Mat {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

/// `S^{-1/2}` and `S^{1/2}` for the second-moment matrix `S` about the centroid.
fn whitening(poly: &ConvexPolygon) -> (Mat, Mat) {
    let o = poly.centroid();
    let mut s = [[0.0; 2]; 2];
    for (a, b) in poly.edges() {
        let (a, b) = (a - o, b - o);
        let area = 0.5 * a.cross(b);
        s[0][0] += area / 6.0 * (a.x * a.x + a.x * b.x + b.x * b.x);
        s[1][1] += area / 6.0 * (a.y * a.y + a.y * b.y + b.y * b.y);
        s[0][1] += area / 12.0 * (2.0 * a.x * a.y + a.x * b.y + a.y * b.x + 2.0 * b.x * b.y);
    }
    s[1][0] = s[0][1];
    let area = poly.area();
    let s = s.map(|row| row.map(|v| v / area));
    // √S = (S + √det·I) / √(trace + 2√det)
    let root_det = (s[0][0] * s[1][1] - s[0][1] * s[1][0]).sqrt();
    let k = (s[0][0] + s[1][1] + 2.0 * root_det).sqrt();
    let sqrt = [[(s[0][0] + root_det) / k, s[0][1] / k], [s[1][0] / k, (s[1][1] + root_det) / k]];
    (mat_inv(&sqrt), sqrt)
}

fn mul(m: &Mat, v: Point) -> Point {
    Point::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
}

/// `Rot(α)·diag(σ, 1/σ)·Rot(β)` with `σ = exp(ln_sigma)`.
fn linear_part(alpha: f64, ln_sigma: f64, beta: f64) -> Mat {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (s, is) = (ln_sigma.exp(), (-ln_sigma).exp());
    // Rot(α)·diag = [[ca·s, −sa·is], [sa·s, ca·is]]
    let a = [[ca * s, -sa * is], [sa * s, ca * is]];
    [
        [a[0][0] * cb + a[0][1] * sb, -a[0][0] * sb + a[0][1] * cb],
        [a[1][0] * cb + a[1][1] * sb, -a[1][0] * sb + a[1][1] * cb],
    ]
}

/// Rescales to unit determinant; the ratio does not depend on the scale.
fn unit_det(m: &Mat) -> Mat {
    let k = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).sqrt();
    m.map(|row| row.map(|v| v / k))
}

/// Placement of `L·C` inside and around `D`, both relative to `cen(D)`:
/// `t·L·c + u ⊆ D ⊆ μ·L·c + w`.
#[derive(Debug, Clone, Copy)]
struct Fit {
    lambda: f64,
    t: f64,
    u: Point,
    mu: f64,
    w: Point,
}

fn fit_cen(c: &Body, d: &Body, l: &Mat) -> Fit {
    let inner = c.verts.iter().map(|&v| d.gauge.eval(mul(l, v))).fold(f64::NEG_INFINITY, f64::max);
    let li = mat_inv(l);
    let outer = d.verts.iter().map(|&v| c.gauge.eval(mul(&li, v))).fold(f64::NEG_INFINITY, f64::max);
    let t = 1.0 / inner;
    Fit { lambda: inner * outer, t, u: Point::ORIGIN, mu: outer, w: Point::ORIGIN }
}

/// Two LPs in `(scale, translation)`: the largest `t·X + u ⊆ D` and the
/// smallest `D ⊆ μ·X + w`, with `X = L·C`. Scales are then recomputed in
/// closed form from the LP translations so containment holds exactly.
fn fit_extended(c: &Body, d: &Body, l: &Mat) -> Result<Fit> {
    let x: Vec<Point> = c.verts.iter().map(|&v| mul(l, v)).collect();
    let support = |pts: &[Point], n: Point| pts.iter().map(|p| p.dot(n)).fold(f64::NEG_INFINITY, f64::max);
    let li = mat_inv(l);
    // facets of X: normals transform by L^{-T}
    let x_facets: Vec<(Point, f64)> = c
        .facets
        .iter()
        .map(|&(n, h)| {
            let m = Point::new(li[0][0] * n.x + li[1][0] * n.y, li[0][1] * n.x + li[1][1] * n.y);
            let len = m.norm();
            (m / len, h / len)
        })
        .collect();
    let lp_err = |e: microlp::Error| Error::Numeric(format!("linear program failed: {e}"));
    let interrupted = |_| Error::Numeric("linear program interrupted".into());

    let mut inner = Problem::new(OptimizationDirection::Maximize);
    let t = inner.add_var(1.0, (0.0, f64::INFINITY));
    let ux = inner.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    let uy = inner.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    for &(n, h) in &d.facets {
        inner.add_constraint(&[(t, support(&x, n)), (ux, n.x), (uy, n.y)], ComparisonOp::Le, h);
    }
    let sol = inner.solve().map_err(lp_err)?.into_solution().map_err(interrupted)?;
    let u = Point::new(sol.var_value(ux), sol.var_value(uy));
    let t = d
        .facets
        .iter()
        .map(|&(n, h)| (h - n.dot(u)) / support(&x, n))
        .fold(f64::INFINITY, f64::min);

    let mut outer = Problem::new(OptimizationDirection::Minimize);
    let mu = outer.add_var(1.0, (0.0, f64::INFINITY));
    let wx = outer.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    let wy = outer.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    for &(m, g) in &x_facets {
        outer.add_constraint(&[(mu, g), (wx, m.x), (wy, m.y)], ComparisonOp::Ge, support(&d.verts, m));
    }
    let sol = outer.solve().map_err(lp_err)?.into_solution().map_err(interrupted)?;
    let w = Point::new(sol.var_value(wx), sol.var_value(wy));
    let mu = x_facets
        .iter()
        .map(|&(m, g)| (support(&d.verts, m) - m.dot(w)) / g)
        .fold(f64::NEG_INFINITY, f64::max);
    if !(t > 0.0) {
        return Err(Error::Numeric("inner scale collapsed".into()));
    }
    Ok(Fit { lambda: mu / t, t, u, mu, w })
}

struct Search<'a> {
    c: &'a Body,
    d: &'a Body,
    mode: Mode,
}

impl Search<'_> {
    fn fit_matrix(&self, l: &Mat) -> Result<Fit> {
        match self.mode {
            Mode::Cen => Ok(fit_cen(self.c, self.d, l)),
            Mode::Extended => fit_extended(self.c, self.d, l),
        }
    }

    fn fit(&self, x: &[f64]) -> Result<Fit> {
        self.fit_matrix(&linear_part(x[0], x[1], x[2]))
    }

    fn lambda(&self, x: &[f64]) -> f64 {
        self.fit(x).map(|f| f.lambda).unwrap_or(f64::INFINITY)
    }
}

/// Local minimisation of the centroid ratio over all linear maps near `m0` by
/// sequential linear programming. Each step linearises `M⁻¹` about the current
/// map, solves for the step inside a trust region and is kept only if the
/// exact ratio decreases.
fn polish(c: &Body, d: &Body, m0: &Mat) -> Mat {
    let inner_normals: Vec<Point> = d.facets.iter().map(|&(n, h)| n / h).collect();
    let outer_normals: Vec<Point> = c.facets.iter().map(|&(n, h)| n / h).collect();
    let ratio = |m: &Mat| fit_cen(c, d, m).lambda;
    let mut m = *m0;
    let mut best = ratio(&m);
    let mut radius = 1e-2;
    for _ in 0..200 {
        if radius < 1e-13 {
            break;
        }
        // scale so that M·C touches D from inside
        let inner = c.verts.iter().map(|&v| d.gauge.eval(mul(&m, v))).fold(f64::NEG_INFINITY, f64::max);
        m = m.map(|row| row.map(|v| v / inner));
        let n0 = mat_inv(&m);
        let mu0 = best;

        let mut lp = Problem::new(OptimizationDirection::Minimize);
        let delta: Vec<_> = (0..4).map(|_| lp.add_var(0.0, (-radius, radius))).collect();
        let mu = lp.add_var(1.0, (0.0, f64::INFINITY));
        let slack = 4.0 * radius * 10.0;
        for a in &inner_normals {
            for &v in &c.verts {
                let x = mul(&m, v);
                let val = a.dot(x);
                if val >= 1.0 - slack * a.norm() * v.norm() - 1e-9 {
                    let coef = [a.x * v.x, a.x * v.y, a.y * v.x, a.y * v.y];
                    let row: Vec<_> = delta.iter().copied().zip(coef).collect();
                    lp.add_constraint(row.as_slice(), ComparisonOp::Le, 1.0 - val);
                }
            }
        }
        for b in &outer_normals {
            let z = Point::new(n0[0][0] * b.x + n0[1][0] * b.y, n0[0][1] * b.x + n0[1][1] * b.y);
            for &w in &d.verts {
                let y = mul(&n0, w);
                let val = b.dot(y);
                if val >= mu0 - slack * z.norm() * y.norm() * 4.0 - 1e-9 {
                    let coef = [-z.x * y.x, -z.x * y.y, -z.y * y.x, -z.y * y.y];
                    let mut row: Vec<_> = delta.iter().copied().zip(coef).collect();
                    row.push((mu, -1.0));
                    lp.add_constraint(row.as_slice(), ComparisonOp::Le, -val);
                }
            }
        }
        let step = lp.solve().ok().and_then(|o| o.into_solution().ok()).map(|sol| {
            let v: Vec<f64> = delta.iter().map(|&x| sol.var_value(x)).collect();
            [[m[0][0] + v[0], m[0][1] + v[1]], [m[1][0] + v[2], m[1][1] + v[3]]]
        });
        match step {
            Some(next) if next[0][0] * next[1][1] - next[0][1] * next[1][0] > 0.0 && ratio(&next) < best => {
                best = ratio(&next);
                m = next;
                radius = (radius * 2.0).min(0.1);
            }
            _ => radius *= 0.25,
        }
    }
    unit_det(&m)
}

/// Best `(λ, linear part)` for one orientation of `C`.
fn search(c: &Body, d: &Body, cfg: &EstimatorConfig) -> (f64, Mat) {
    let s = Search { c, d, mode: cfg.mode };
    let ls = cfg.sigma_max.ln();
    let steps = [
        2.0 * std::f64::consts::PI / cfg.n_alpha as f64,
        2.0 * ls / (cfg.n_sigma - 1) as f64,
        std::f64::consts::PI / cfg.n_beta as f64,
    ];
    let cells: Vec<[f64; 3]> = (0..cfg.n_alpha)
        .flat_map(|i| (0..cfg.n_sigma).flat_map(move |j| (0..cfg.n_beta).map(move |k| (i, j, k))))
        .map(|(i, j, k)| [i as f64 * steps[0], -ls + j as f64 * steps[1], k as f64 * steps[2]])
        .collect();
    let values: Vec<f64> = cells.par_iter().map(|x| s.lambda(x)).collect();

    // seeds: grid-local minima (α is periodic), best first, so refinement explores distinct basins
    let (na, ns, nb) = (cfg.n_alpha as isize, cfg.n_sigma as isize, cfg.n_beta as isize);
    let index = |i: isize, j: isize, k: isize| (i.rem_euclid(na) * ns * nb + j * nb + k) as usize;
    let mut minima: Vec<(f64, usize)> = (0..cells.len())
        .filter(|&n| {
            let (i, j, k) = ((n as isize) / (ns * nb), (n as isize / nb) % ns, n as isize % nb);
            let v = values[n];
            (-1..=1).all(|di| {
                (-1..=1).all(|dj| {
                    (-1..=1).all(|dk| {
                        let (jj, kk) = (j + dj, k + dk);
                        jj < 0 || jj >= ns || kk < 0 || kk >= nb || values[index(i + di, jj, kk)] >= v
                    })
                })
            })
        })
        .map(|n| (values[n], n))
        .collect();
    minima.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    minima.truncate(SEEDS);

    let refined: Vec<(f64, Mat)> = minima
        .par_iter()
        .map(|&(v0, n)| {
            let mut best = (v0, cells[n]);
            let mut step = steps.map(|h| 0.5 * h);
            let mut left = cfg.refine_iters;
            while left > 0 {
                let iters = left.min(ROUND);
                let m = nelder_mead::minimize(|x| s.lambda(x), &best.1, &step, iters, 0.0);
                left -= iters;
                if m.value < best.0 {
                    best = (m.value, [m.x[0], m.x[1], m.x[2]]);
                }
                step = step.map(|h| 0.25 * h);
            }
            let l = linear_part(best.1[0], best.1[1], best.1[2]);
            if cfg.mode == Mode::Cen && best.0.is_finite() {
                let polished = polish(c, d, &l);
                let v = fit_cen(c, d, &polished).lambda;
                if v < best.0 {
                    return (v, polished);
                }
            }
            (best.0, l)
        })
        .collect();
    // the global grid minimum is always a local one, so `refined` is never empty
    refined.into_iter().fold((f64::INFINITY, [[1.0, 0.0], [0.0, 1.0]]), |a, b| if b.0 < a.0 { b } else { a })
}

fn estimate(c: &ConvexPolygon, d: &ConvexPolygon, cfg: &EstimatorConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let d_body = Body::new(d, false)?;
    let c_bodies = [Body::new(c, false)?, Body::new(c, true)?];
    // (ratio, linear part, C reflected)
    let mut candidates: Vec<(f64, Mat, bool)> = Vec::new();
    for (reflect, c_body) in [false, true].into_iter().zip(&c_bodies) {
        let (v, l) = search(c_body, &d_body, cfg);
        candidates.push((v, l, reflect));
    }
    if cfg.mode == Mode::Cen {
        // the centroid distance is symmetric: also fit D into C and invert, so that
        // swapping the arguments searches the same set of maps
        let d_reflected = Body::new(d, true)?;
        for (reflect, body) in [(false, &d_body), (true, &d_reflected)] {
            let (_, back) = search(body, &c_bodies[0], cfg);
            let inv = mat_inv(&back);
            // with R = diag(1, −1): L·R = R·inv  ⇒  L = R·inv·R
            let l = if reflect { [[inv[0][0], -inv[0][1]], [-inv[1][0], inv[1][1]]] } else { inv };
            let v = fit_cen(&c_bodies[reflect as usize], &d_body, &l).lambda;
            candidates.push((v, unit_det(&l), reflect));
        }
    }
    let (value, l, reflected) =
        candidates.into_iter().fold((f64::INFINITY, [[1.0, 0.0], [0.0, 1.0]], false), |a, b| if b.0 < a.0 { b } else { a });
    if !value.is_finite() {
        return Err(Error::Numeric("no finite ratio found".into()));
    }
    let c_body = &c_bodies[reflected as usize];
    let fit = Search { c: c_body, d: &d_body, mode: cfg.mode }.fit_matrix(&l)?;

    // x ↦ cen(D) + W_D⁻¹·(s·L·R·W_C·(x − cen(C)) + v)
    let place = |scale: f64, shift: Point| -> Result<AffineMap> {
        let r = if reflected { -1.0 } else { 1.0 };
        let lr = [[scale * l[0][0], scale * l[0][1] * r], [scale * l[1][0], scale * l[1][1] * r]];
        let m = mat_mul(&d_body.white_inv, &mat_mul(&lr, &c_body.white));
        let lin = AffineMap::linear(m[0][0], m[0][1], m[1][0], m[1][1])?;
        let offset = d_body.center + mul(&d_body.white_inv, shift) - lin.map_vector(c_body.center);
        Ok(AffineMap::translation(offset).compose(&lin))
    };
    let best_map = place(fit.t, fit.u)?;
    let outer_map = place(fit.mu, fit.w)?;

    let inner = best_map.map_polygon(c);
    let outer = outer_map.map_polygon(c);
    let tol = ESTIMATE_VERIFY_TOL * d.diameter();
    let verified = d.contains_polygon(&inner, tol) && outer.contains_polygon(d, tol * fit.lambda);
    Ok(EstimateResult {
        lambda_hat: fit.lambda,
        best_map,
        inner_scale: fit.t,
        outer_map,
        reflected,
        mode: cfg.mode,
        verified,
    })
}

/// Upper bound on the centroid Banach-Mazur distance: the map keeps
/// `cen(best_map(C)) = cen(D)` and the homothety is about `cen(D)`.
pub fn estimate_cen(c: &ConvexPolygon, d: &ConvexPolygon, cfg: &EstimatorConfig) -> Result<EstimateResult> {
    estimate(c, d, &EstimatorConfig { mode: Mode::Cen, ..*cfg })
}

/// Upper bound on the Banach-Mazur distance without the centroid constraint.
pub fn estimate_extended(c: &ConvexPolygon, d: &ConvexPolygon, cfg: &EstimatorConfig) -> Result<EstimateResult> {
    estimate(c, d, &EstimatorConfig { mode: Mode::Extended, ..*cfg })
}

/// Regular pentagon, its inscribed triangle with vertex `(1, 0)` and
/// opposite side on `x = −1/2`, and the enlarged triangle covering the pentagon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PentagonTriangle {
    pub pentagon: ConvexPolygon,
    pub triangle: ConvexPolygon,
    pub enlarged: ConvexPolygon,
    pub lambda: f64,
    /// Largest centroid distance from the origin among the three bodies.
    pub centroid_offset: f64,
    pub verified: bool,
}

pub fn pentagon_triangle_witness() -> Result<PentagonTriangle> {
    let lambda = (7.0 - 5f64.sqrt()) / 2.0;
    let pentagon = ConvexPolygon::regular(5, Point::ORIGIN, 1.0, 0.0)?;
    let at = |deg: f64| Point::new(deg.to_radians().cos(), deg.to_radians().sin());
    let (a, b) = (at(72.0), at(144.0));
    let y = a.y + (b.y - a.y) * (-0.5 - a.x) / (b.x - a.x);
    let triangle = ConvexPolygon::new(vec![Point::new(1.0, 0.0), Point::new(-0.5, y), Point::new(-0.5, -y)])?;
    let enlarged = triangle.scaled_about(Point::ORIGIN, lambda)?;
    let centroid_offset = [&pentagon, &triangle, &enlarged]
        .iter()
        .map(|p| p.centroid().norm())
        .fold(0.0, f64::max);
    let tol = 1e-9;
    let verified = pentagon.contains_polygon(&triangle, tol) && enlarged.contains_polygon(&pentagon, tol);
    Ok(PentagonTriangle { pentagon, triangle, enlarged, lambda, centroid_offset, verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn square() -> ConvexPolygon {
        ConvexPolygon::regular(4, Point::ORIGIN, 1.0, 0.3).unwrap()
    }

    fn triangle() -> ConvexPolygon {
        ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(0.4, 1.3)]).unwrap()
    }

    #[test]
    fn linear_part_has_unit_determinant() {
        let l = linear_part(0.7, 0.9, -1.3);
        assert_abs_diff_eq!(l[0][0] * l[1][1] - l[0][1] * l[1][0], 1.0, epsilon = 1e-12);
        let li = mat_inv(&l);
        let v = mul(&li, mul(&l, Point::new(0.3, -2.0)));
        assert_abs_diff_eq!(v.x, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(v.y, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn identical_bodies_are_at_distance_one() {
        let cfg = EstimatorConfig::new(Budget::Low, Mode::Cen);
        let r = estimate_cen(&triangle(), &triangle(), &cfg).unwrap();
        assert!(r.verified);
        assert_abs_diff_eq!(r.lambda_hat, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn homothets_are_at_distance_one() {
        let disk = ConvexPolygon::regular(96, Point::ORIGIN, 1.0, 0.0).unwrap();
        let big = ConvexPolygon::regular(96, Point::new(3.0, -1.0), 2.0, 0.0).unwrap();
        let cfg = EstimatorConfig::new(Budget::Low, Mode::Cen);
        let r = estimate_cen(&disk, &big, &cfg).unwrap();
        assert!(r.verified);
        assert_abs_diff_eq!(r.lambda_hat, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn extended_identical_bodies() {
        let cfg = EstimatorConfig::new(Budget::Low, Mode::Extended);
        let r = estimate_extended(&triangle(), &triangle(), &cfg).unwrap();
        assert!(r.verified);
        assert_abs_diff_eq!(r.lambda_hat, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn square_triangle_low_budget() {
        let cfg = EstimatorConfig::new(Budget::Low, Mode::Cen);
        let r = estimate_cen(&square(), &triangle(), &cfg).unwrap();
        assert!(r.verified, "{r:?}");
        assert!(r.lambda_hat >= 2.5 - 1e-6 && r.lambda_hat <= 2.6, "{}", r.lambda_hat);
    }

    #[test]
    fn extended_square_triangle() {
        let cfg = EstimatorConfig::new(Budget::Low, Mode::Extended);
        let r = estimate_extended(&square(), &triangle(), &cfg).unwrap();
        assert!(r.verified, "{r:?}");
        assert!(r.lambda_hat <= 2.55 && (r.lambda_hat - 2.0).abs() < 1e-3, "{}", r.lambda_hat);
    }

    #[test]
    fn pentagon_triangle() {
        let w = pentagon_triangle_witness().unwrap();
        assert!(w.verified);
        assert!(w.centroid_offset <= 1e-12);
        assert_abs_diff_eq!(w.lambda, 2.381966011250105, epsilon = 1e-12);
        assert_abs_diff_eq!(w.triangle.vertices().iter().map(|v| v.y).fold(0.0, f64::max), 0.6882, epsilon = 1e-4);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = EstimatorConfig { n_sigma: 2, ..EstimatorConfig::default() };
        assert!(estimate_cen(&square(), &triangle(), &cfg).is_err());
        let cfg = EstimatorConfig { sigma_max: 1.0, ..EstimatorConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
