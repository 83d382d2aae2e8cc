//! Numeric certification of the two maximisations behind the 69/17 bound:
//! `g(p, r)` over the rectangle `Q` (interior, edges, corners) and
//! `f(p, q, r, s)` over `T × T⁺` (sampling plus local refinement).
//!
//! With `A(p) = (3 − 2p)/(1 + p)` and `B(r) = (3 + r)/(3 − 2r)` the function
//! factors as `g = A·B`, so `∂g/∂p = −5B/(1 + p)²` and `∂g/∂r = 9A/(3 − 2r)²`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::nelder_mead;
use crate::normalize::{FundamentalDomains, DOMAIN_TOL};
use crate::witness::f_ratio;
use crate::{Error, Result, BOUND};

/// Absolute tolerance on corner values and the grid residual.
pub const CORNER_TOL: f64 = 1e-12;
/// Slack allowed above 69/17 for sampled values of `f`.
pub const SAMPLE_TOL: f64 = 1e-9;
/// Relative agreement required between closed-form and finite-difference partials.
pub const DERIVATIVE_TOL: f64 = 1e-6;

const FD_STEP: f64 = 1e-6;
const EDGE_SAMPLES: usize = 10_000;
const DERIVATIVE_SAMPLES: usize = 100;
const DEFAULT_SEED: u64 = 0x6917;

/// `g(p, r) = √3(3 − 2p)(3 + r) / ((3 − 2r)(√3 + √3p))`.
pub fn g_value(p: f64, r: f64) -> Result<f64> {
    if r >= 1.5 || p <= -1.0 {
        return Err(Error::Domain(format!("g has a pole at (p, r) = ({p}, {r})")));
    }
    Ok(a_factor(p) * b_factor(r))
}

fn a_factor(p: f64) -> f64 {
    (3.0 - 2.0 * p) / (1.0 + p)
}

fn b_factor(r: f64) -> f64 {
    (3.0 + r) / (3.0 - 2.0 * r)
}

/// `(∂g/∂p, ∂g/∂r)`.
pub fn g_gradient(p: f64, r: f64) -> (f64, f64) {
    (-5.0 * b_factor(r) / (1.0 + p).powi(2), 9.0 * a_factor(p) / (3.0 - 2.0 * r).powi(2))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerValue {
    pub label: String,
    pub at: Point,
    pub value: f64,
    /// Closed-form rational value.
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeExtremum {
    pub edge: String,
    pub at: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCheck {
    pub name: String,
    pub samples: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Argmax {
    Rectangle(Point),
    Domain([f64; 4]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub max_value: f64,
    pub argmax: Argmax,
    pub corner_table: Vec<CornerValue>,
    /// Grid cells (centers) where both partials may vanish.
    pub interior_critical_points: Vec<Point>,
    pub edge_extrema: Vec<EdgeExtremum>,
    pub monotonicity_checks: Vec<MonotonicityCheck>,
    /// Largest sampled value minus 69/17.
    pub grid_residual: f64,
    /// Largest relative disagreement between closed-form and finite-difference partials.
    pub derivative_check: f64,
    pub samples: usize,
    pub certified: bool,
    pub failures: Vec<String>,
}

impl BoundReport {
    /// Turns an uncertified report into a certification error listing the failures.
    pub fn require_certified(self) -> Result<Self> {
        if self.certified {
            Ok(self)
        } else {
            Err(Error::Certification(self.failures.join("; ")))
        }
    }
}

/// Certifies `max_Q g = 69/17` at `(0, 2/7)`; fails with the offending locations otherwise.
pub fn certify_g_max_on_q(grid_n: usize) -> Result<BoundReport> {
    analyze_g_on_q(grid_n)?.require_certified()
}

/// Runs every check of the interior/edge/corner method and reports, without failing on a negative outcome.
pub fn analyze_g_on_q(grid_n: usize) -> Result<BoundReport> {
    if grid_n < 64 {
        return Err(Error::InvalidInput(format!("grid must be at least 64, got {grid_n}")));
    }
    let (pmax, rmax) = FundamentalDomains::q();
    let mut failures = Vec::new();

    // closed-form partials against central differences
    let derivative_check = (0..DERIVATIVE_SAMPLES * DERIVATIVE_SAMPLES)
        .map(|k| {
            let p = pmax * ((k / DERIVATIVE_SAMPLES) as f64 + 0.5) / DERIVATIVE_SAMPLES as f64;
            let r = rmax * ((k % DERIVATIVE_SAMPLES) as f64 + 0.5) / DERIVATIVE_SAMPLES as f64;
            let g = |p, r| a_factor(p) * b_factor(r);
            let fd_p = (g(p + FD_STEP, r) - g(p - FD_STEP, r)) / (2.0 * FD_STEP);
            let fd_r = (g(p, r + FD_STEP) - g(p, r - FD_STEP)) / (2.0 * FD_STEP);
            let (gp, gr) = g_gradient(p, r);
            ((gp - fd_p) / gp).abs().max(((gr - fd_r) / gr).abs())
        })
        .fold(0.0, f64::max);
    if derivative_check > DERIVATIVE_TOL {
        failures.push(format!("closed-form partials disagree with finite differences ({derivative_check:e})"));
    }

    // interior: cells where both padded partial ranges straddle zero
    let n = grid_n;
    let node = |i: usize, j: usize| (pmax * i as f64 / n as f64, rmax * j as f64 / n as f64);
    let grads: Vec<(f64, f64)> = (0..=n)
        .into_par_iter()
        .flat_map_iter(|i| (0..=n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (p, r) = node(i, j);
            g_gradient(p, r)
        })
        .collect();
    let at = |i: usize, j: usize| grads[i * (n + 1) + j];
    let interior_critical_points: Vec<Point> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (0..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let corners = [at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)];
            let straddles = |vals: [f64; 4]| {
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                // Lipschitz padding: the variation seen across the cell again
                let pad = hi - lo;
                lo - pad <= 0.0 && hi + pad >= 0.0
            };
            (straddles(corners.map(|c| c.0)) && straddles(corners.map(|c| c.1))).then(|| {
                let (p, r) = node(i, j);
                Point::new(p + 0.5 * pmax / n as f64, r + 0.5 * rmax / n as f64)
            })
        })
        .collect();
    if !interior_critical_points.is_empty() {
        failures.push(format!("{} interior cells admit a critical point", interior_critical_points.len()));
    }

    // edges: the derivative along each side keeps one sign
    let edges: [(&str, fn(f64) -> (f64, f64), bool); 4] = [
        ("p = 0", |t| (0.0, t * 2.0 / 7.0), false),
        ("p = 4/21", |t| (4.0 / 21.0, t * 2.0 / 7.0), false),
        ("r = 0", |t| (t * 4.0 / 21.0, 0.0), true),
        ("r = 2/7", |t| (t * 4.0 / 21.0, 2.0 / 7.0), true),
    ];
    let mut edge_extrema = Vec::new();
    let mut monotonicity_checks = Vec::new();
    for (name, param, along_p) in edges {
        let derivs: Vec<(f64, f64, f64)> = (1..EDGE_SAMPLES)
            .map(|k| {
                let (p, r) = param(k as f64 / EDGE_SAMPLES as f64);
                let (gp, gr) = g_gradient(p, r);
                (p, r, if along_p { gp } else { gr })
            })
            .collect();
        let mut passed = derivs.iter().all(|d| d.2 != 0.0);
        for w in derivs.windows(2) {
            if w[0].2.signum() != w[1].2.signum() {
                passed = false;
                edge_extrema.push(EdgeExtremum { edge: name.into(), at: Point::new(w[1].0, w[1].1) });
            }
        }
        monotonicity_checks.push(MonotonicityCheck { name: format!("g monotone on {name}"), samples: derivs.len(), passed });
    }
    if !edge_extrema.is_empty() {
        failures.push(format!("{} sign changes along the sides of Q", edge_extrema.len()));
    }

    let corner_table: Vec<CornerValue> = [
        ("(0, 0)", 0.0, 0.0, 3.0),
        ("(4/21, 0)", pmax, 0.0, 11.0 / 5.0),
        ("(0, 2/7)", 0.0, rmax, 69.0 / 17.0),
        ("(4/21, 2/7)", pmax, rmax, 253.0 / 85.0),
    ]
    .into_iter()
    .map(|(label, p, r, expected)| CornerValue { label: label.into(), at: Point::new(p, r), value: g_value(p, r).unwrap(), expected })
    .collect();
    for c in &corner_table {
        if (c.value - c.expected).abs() > CORNER_TOL {
            failures.push(format!("corner {} evaluates to {} instead of {}", c.label, c.value, c.expected));
        }
    }

    // full grid including the boundary
    let (max_value, best) = (0..=n)
        .into_par_iter()
        .flat_map_iter(|i| (0..=n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let (p, r) = node(i, j);
            (a_factor(p) * b_factor(r), (i, j))
        })
        .reduce(|| (f64::NEG_INFINITY, (0, 0)), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let (bp, br) = node(best.0, best.1);
    let argmax = Point::new(bp, br);
    let grid_residual = max_value - BOUND;
    if grid_residual > CORNER_TOL {
        failures.push(format!("grid maximum {max_value} exceeds 69/17 by {grid_residual:e}"));
    }
    if argmax != Point::new(0.0, rmax) {
        failures.push(format!("grid maximum attained at {argmax:?}, not at (0, 2/7)"));
    }

    Ok(BoundReport {
        max_value,
        argmax: Argmax::Rectangle(argmax),
        corner_table,
        interior_critical_points,
        edge_extrema,
        monotonicity_checks,
        grid_residual,
        derivative_check,
        samples: (n + 1) * (n + 1),
        certified: failures.is_empty(),
        failures,
    })
}

fn in_t(p: f64, q: f64) -> bool {
    crate::normalize::in_triangle_t(Point::new(p, q))
}

fn in_t_plus(r: f64, s: f64) -> bool {
    crate::normalize::in_triangle_t_plus(Point::new(r, s))
}

fn f_at(x: &[f64; 4]) -> f64 {
    f_ratio(x[0], x[1], x[2], x[3]).unwrap_or(f64::NAN)
}

/// Uniform point of a triangle by rejection from its bounding box.
fn sample_triangle(rng: &mut ChaCha8Rng, tri: &[Point; 3], inside: impl Fn(f64, f64) -> bool) -> (f64, f64) {
    let (x0, x1) = (tri.iter().map(|v| v.x).fold(f64::INFINITY, f64::min), tri.iter().map(|v| v.x).fold(f64::NEG_INFINITY, f64::max));
    let (y0, y1) = (tri.iter().map(|v| v.y).fold(f64::INFINITY, f64::min), tri.iter().map(|v| v.y).fold(f64::NEG_INFINITY, f64::max));
    loop {
        let x = x0 + (x1 - x0) * rng.random::<f64>();
        let y = y0 + (y1 - y0) * rng.random::<f64>();
        if inside(x, y) {
            return (x, y);
        }
    }
}

/// Barycentric lattice with `k` subdivisions, vertices included.
fn lattice(tri: &[Point; 3], k: usize) -> Vec<Point> {
    let mut pts = Vec::new();
    for i in 0..=k {
        for j in 0..=k - i {
            let (a, b) = (i as f64 / k as f64, j as f64 / k as f64);
            pts.push(tri[0] * (1.0 - a - b) + tri[1] * a + tri[2] * b);
        }
    }
    pts
}

/// Certifies `max f ≤ 69/17` over `T × T⁺` with the maximiser near `(0, 0, 2/7, 0)`.
pub fn maximize_f_on_domain(samples: usize, refine_iters: usize) -> Result<BoundReport> {
    analyze_f_on_domain(samples, refine_iters, DEFAULT_SEED)?.require_certified()
}

/// Sampling, monotonicity checks and local refinement of `f` on `T × T⁺`.
pub fn analyze_f_on_domain(samples: usize, refine_iters: usize, seed: u64) -> Result<BoundReport> {
    if samples < 100_000 {
        return Err(Error::InvalidInput(format!("at least 1e5 samples are required, got {samples}")));
    }
    let t = FundamentalDomains::t();
    let tp = FundamentalDomains::t_plus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<[f64; 4]> = (0..samples)
        .map(|_| {
            let (p, q) = sample_triangle(&mut rng, &t, in_t);
            let (r, s) = sample_triangle(&mut rng, &tp, in_t_plus);
            [p, q, r, s]
        })
        .collect();
    let lat_t = lattice(&t, 12);
    let lat_tp = lattice(&tp, 12);
    for a in &lat_t {
        for b in &lat_tp {
            points.push([a.x, a.y, b.x, b.y]);
        }
    }

    let evaluated: Vec<(f64, bool, bool)> = points
        .par_iter()
        .map(|x| {
            let v = f_at(x);
            let shifted = |k: usize, h: f64| {
                let mut y = *x;
                y[k] += h;
                f_at(&y)
            };
            let dq = (shifted(1, FD_STEP) - shifted(1, -FD_STEP)) / (2.0 * FD_STEP);
            let ds = (shifted(3, FD_STEP) - shifted(3, -FD_STEP)) / (2.0 * FD_STEP);
            (v, dq < 0.0, ds > 0.0)
        })
        .collect();

    let mut failures = Vec::new();
    let n_total = points.len();
    let dq_ok = evaluated.iter().filter(|e| e.1).count();
    let ds_ok = evaluated.iter().filter(|e| e.2).count();
    let monotonicity_checks = vec![
        MonotonicityCheck { name: "∂f/∂q < 0".into(), samples: n_total, passed: dq_ok == n_total },
        MonotonicityCheck { name: "∂f/∂s > 0".into(), samples: n_total, passed: ds_ok == n_total },
    ];
    for m in &monotonicity_checks {
        if !m.passed {
            failures.push(format!("{} fails at some samples", m.name));
        }
    }
    if evaluated.iter().any(|e| !e.0.is_finite()) {
        failures.push("f is not finite at some samples".into());
    }

    let mut order: Vec<usize> = (0..n_total).collect();
    order.sort_by(|&i, &j| evaluated[j].0.total_cmp(&evaluated[i].0).then(i.cmp(&j)));
    let mut best_value = evaluated[order[0]].0;
    let mut best_x = points[order[0]];

    // local refinement from the best samples, staying inside the domain
    let feasible = |x: &[f64]| in_t(x[0], x[1]) && in_t_plus(x[2], x[3]);
    let refined: Vec<(f64, [f64; 4])> = order[..100.min(n_total)]
        .par_iter()
        .map(|&i| {
            let x0 = points[i];
            let m = nelder_mead::minimize(
                |x| if feasible(x) { -f_at(&[x[0], x[1], x[2], x[3]]) } else { f64::INFINITY },
                &x0,
                &[2e-3, -1e-3, -2e-3, 1e-3],
                refine_iters,
                0.0,
            );
            (-m.value, [m.x[0], m.x[1], m.x[2], m.x[3]])
        })
        .collect();
    for (v, x) in refined {
        if v > best_value {
            best_value = v;
            best_x = x;
        }
    }

    if best_value > BOUND + SAMPLE_TOL {
        failures.push(format!("f reaches {best_value} at {best_x:?}, above 69/17"));
    }
    let target = [0.0, 0.0, 2.0 / 7.0, 0.0];
    let dist = best_x.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    if dist > 1e-3 {
        failures.push(format!("maximiser {best_x:?} is {dist:e} away from (0, 0, 2/7, 0)"));
    }
    let _ = DOMAIN_TOL;

    Ok(BoundReport {
        max_value: best_value,
        argmax: Argmax::Domain(best_x),
        corner_table: Vec::new(),
        interior_critical_points: Vec::new(),
        edge_extrema: Vec::new(),
        monotonicity_checks,
        grid_residual: best_value - BOUND,
        derivative_check: 0.0,
        samples: n_total,
        certified: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn g_values() {
        assert_abs_diff_eq!(g_value(0.0, 2.0 / 7.0).unwrap(), 69.0 / 17.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g_value(0.0, 0.0).unwrap(), 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g_value(4.0 / 21.0, 2.0 / 7.0).unwrap(), 253.0 / 85.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g_value(0.0, 2.0 / 7.0).unwrap() * 17.0, 69.0, epsilon = 1e-12);
        assert!(matches!(g_value(0.0, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn g_is_f_on_the_axes() {
        for i in 0..50 {
            for j in 0..50 {
                let p = 4.0 / 21.0 * i as f64 / 49.0;
                let r = 2.0 / 7.0 * j as f64 / 49.0;
                assert_abs_diff_eq!(g_value(p, r).unwrap(), f_ratio(p, 0.0, r, 0.0).unwrap(), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn f_below_bound_off_the_axes() {
        let v = f_ratio(0.0, 3f64.sqrt() / 21.0 * 0.5, 2.0 / 7.0, -0.01).unwrap();
        assert!(v < BOUND);
    }

    #[test]
    fn small_grid_certifies() {
        let r = certify_g_max_on_q(64).unwrap();
        assert!(r.interior_critical_points.is_empty() && r.edge_extrema.is_empty());
        assert_eq!(r.argmax, Argmax::Rectangle(Point::new(0.0, 2.0 / 7.0)));
        assert!(analyze_g_on_q(10).is_err());
    }

    #[test]
    fn residual_does_not_worsen_with_finer_grids() {
        let coarse = analyze_g_on_q(64).unwrap().grid_residual;
        let fine = analyze_g_on_q(128).unwrap().grid_residual;
        assert!(fine <= coarse);
    }

    #[test]
    fn report_json_round_trip() {
        let r = analyze_g_on_q(64).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<BoundReport>(&s).unwrap(), r);
    }
}
