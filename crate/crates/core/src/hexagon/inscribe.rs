//! Constructive search for an inscribed affine-regular hexagon.
//!
//! For a direction `u(θ)` the hexagon is read off three parallel chords at
//! transverse offsets `a > m > b`: the middle chord is the long diagonal
//! `v3 v6`, the outer chords carry the sides `v1 v2` and `v4 v5`. The
//! conditions are `m = (a + b)/2`, `w(a) = w(b) = w(m)/2` and collinear chord
//! midpoints. For each `θ` the first two are solved by bisection on `m`; the
//! remaining alignment defect `g(θ)` is odd under `θ ↦ θ + π`, so it has a
//! root on `[0, π]`, located by a sign scan plus bisection.
//!
//! When an edge of the polygon is parallel to `u(θ)` the outer chord may lie
//! on that edge and the side can slide along it; `g(θ)` then becomes an
//! interval and jumps across it. Edge directions are therefore always part of
//! the scan.

use std::f64::consts::PI;

use super::AffineRegularHexagon;
use crate::geometry::{direction, ConvexPolygon};
use crate::{Error, Result};

/// Default relative tolerance on the vertex-to-boundary residual.
pub const DEFAULT_INSCRIBE_TOL: f64 = 1e-9;

const SCAN_SAMPLES: usize = 256;
const BISECTION_STEPS: usize = 64;
/// Offsets within this fraction of the support ends are excluded for `m`.
const TIP_MARGIN: f64 = 0.0005;
/// Vertices this close (relative to the diameter) to an extreme offset are
/// treated as lying on a flat top or bottom edge.
const PLATEAU_SNAP: f64 = 1e-11;

/// Admissible side position at one outer offset: the side's midpoint along
/// `u` may be anywhere in `[lo, hi]` (a single value unless the side lies on a
/// flat edge).
#[derive(Debug, Clone, Copy)]
struct Level {
    offset: f64,
    lo: f64,
    hi: f64,
}

/// Piecewise-linear chord endpoints `l(t) ≤ r(t)` (coordinates along `u`) as
/// functions of the transverse offset `t`, for a fixed direction.
struct ChordProfile {
    knots: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl ChordProfile {
    fn new(poly: &ConvexPolygon, theta: f64, snap: f64) -> Self {
        let u = direction(theta);
        let n = u.perp();
        let verts = poly.vertices();
        let len = verts.len();
        let mut st: Vec<(f64, f64)> = verts.iter().map(|v| (v.dot(u), v.dot(n))).collect();
        let tmax = st.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let tmin = st.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        for p in &mut st {
            if p.1 >= tmax - snap {
                p.1 = tmax;
            } else if p.1 <= tmin + snap {
                p.1 = tmin;
            }
        }
        let pick = |level: f64, right: bool| -> usize {
            (0..len)
                .filter(|&i| st[i].1 == level)
                .max_by(|&i, &j| {
                    let o = st[i].0.total_cmp(&st[j].0);
                    if right { o } else { o.reverse() }
                })
                .expect("extreme level is attained")
        };
        let bottom_right = pick(tmin, true);
        let top_right = pick(tmax, true);
        let top_left = pick(tmax, false);
        let bottom_left = pick(tmin, false);

        // Counterclockwise in (s, t) coordinates: up the right side, down the left.
        let walk = |from: usize, to: usize| -> Vec<(f64, f64)> {
            let mut chain = vec![st[from]];
            let mut i = from;
            while i != to {
                i = (i + 1) % len;
                chain.push(st[i]);
            }
            chain
        };
        let right_chain = monotone(walk(bottom_right, top_right));
        let mut left_chain = walk(top_left, bottom_left);
        left_chain.reverse();
        let left_chain = monotone(left_chain);

        let mut knots: Vec<f64> = right_chain.iter().chain(&left_chain).map(|p| p.1).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let left = knots.iter().map(|&t| interpolate(&left_chain, t)).collect();
        let right = knots.iter().map(|&t| interpolate(&right_chain, t)).collect();
        ChordProfile { knots, left, right }
    }

    fn tmin(&self) -> f64 {
        self.knots[0]
    }

    fn tmax(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    fn width_at_knot(&self, k: usize) -> f64 {
        self.right[k] - self.left[k]
    }

    /// `(l(t), r(t))`.
    fn at(&self, t: f64) -> (f64, f64) {
        let last = self.knots.len() - 1;
        if t <= self.knots[0] {
            return (self.left[0], self.right[0]);
        }
        if t >= self.knots[last] {
            return (self.left[last], self.right[last]);
        }
        let k = (self.knots.partition_point(|&x| x <= t) - 1).min(last - 1);
        let span = self.knots[k + 1] - self.knots[k];
        let f = if span > 0.0 { (t - self.knots[k]) / span } else { 1.0 };
        (
            self.left[k] + f * (self.left[k + 1] - self.left[k]),
            self.right[k] + f * (self.right[k + 1] - self.right[k]),
        )
    }

    fn width(&self, t: f64) -> f64 {
        let (l, r) = self.at(t);
        r - l
    }

    fn fixed_level(&self, t: f64) -> Level {
        let (l, r) = self.at(t);
        let c = 0.5 * (l + r);
        Level { offset: t, lo: c, hi: c }
    }

    /// Largest offset above `m` where the chord width drops to `target`.
    fn upper_level(&self, m: f64, wm: f64, target: f64) -> Level {
        let last = self.knots.len() - 1;
        if self.width_at_knot(last) >= target {
            return Level {
                offset: self.tmax(),
                lo: self.left[last] + 0.5 * target,
                hi: self.right[last] - 0.5 * target,
            };
        }
        // Above m the superlevel set {w ≥ target} is an interval starting at m.
        let k0 = self.knots.partition_point(|&x| x <= m);
        let k2 = k0 + (k0..=last).collect::<Vec<_>>().partition_point(|&k| self.width_at_knot(k) >= target);
        let (t1, w1) = if k2 == k0 { (m, wm) } else { (self.knots[k2 - 1], self.width_at_knot(k2 - 1)) };
        let (t2, w2) = (self.knots[k2], self.width_at_knot(k2));
        self.fixed_level(crossing(t1, w1, t2, w2, target))
    }

    /// Smallest offset below `m` where the chord width drops to `target`.
    fn lower_level(&self, m: f64, wm: f64, target: f64) -> Level {
        if self.width_at_knot(0) >= target {
            return Level {
                offset: self.tmin(),
                lo: self.left[0] + 0.5 * target,
                hi: self.right[0] - 0.5 * target,
            };
        }
        // knots strictly below m: widths go (< target …, ≥ target …) upwards.
        let k1 = self.knots.partition_point(|&x| x < m);
        let j = (0..k1).collect::<Vec<_>>().partition_point(|&k| self.width_at_knot(k) < target);
        let (t2, w2) = if j == k1 { (m, wm) } else { (self.knots[j], self.width_at_knot(j)) };
        let (t1, w1) = (self.knots[j - 1], self.width_at_knot(j - 1));
        self.fixed_level(crossing(t1, w1, t2, w2, target))
    }
}

/// Offset where the linear interpolant through `(t1, w1)`, `(t2, w2)` equals `target`.
fn crossing(t1: f64, w1: f64, t2: f64, w2: f64, target: f64) -> f64 {
    if w1 == w2 {
        return 0.5 * (t1 + t2);
    }
    let f = ((w1 - target) / (w1 - w2)).clamp(0.0, 1.0);
    t1 + f * (t2 - t1)
}

fn monotone(mut chain: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    for i in 1..chain.len() {
        if chain[i].1 < chain[i - 1].1 {
            chain[i].1 = chain[i - 1].1;
        }
    }
    chain
}

/// `s` on a chain with nondecreasing `t`.
fn interpolate(chain: &[(f64, f64)], t: f64) -> f64 {
    let last = chain.len() - 1;
    if t <= chain[0].1 {
        return chain[0].0;
    }
    if t >= chain[last].1 {
        return chain[last].0;
    }
    let k = (chain.partition_point(|p| p.1 <= t) - 1).min(last - 1);
    let (s1, t1) = chain[k];
    let (s2, t2) = chain[k + 1];
    if t2 > t1 {
        s1 + (t - t1) / (t2 - t1) * (s2 - s1)
    } else {
        s2
    }
}

/// Everything the search knows about one direction.
#[derive(Debug, Clone, Copy)]
struct Sample {
    theta: f64,
    m: f64,
    center_u: f64,
    target: f64,
    upper: Level,
    lower: Level,
    /// Range of the alignment defect `c_a + c_b − 2 c_m`.
    defect_lo: f64,
    defect_hi: f64,
}

impl Sample {
    /// Distance of the defect range from zero.
    fn residual(&self) -> f64 {
        if self.defect_lo > 0.0 {
            self.defect_lo
        } else if self.defect_hi < 0.0 {
            -self.defect_hi
        } else {
            0.0
        }
    }

    fn sign(&self, ztol: f64) -> i8 {
        if self.defect_lo > ztol {
            1
        } else if self.defect_hi < -ztol {
            -1
        } else {
            0
        }
    }
}

struct Search<'a> {
    poly: &'a ConvexPolygon,
    snap: f64,
}

impl Search<'_> {
    fn sample(&self, theta: f64) -> Sample {
        let prof = ChordProfile::new(self.poly, theta, self.snap);
        let (tmin, tmax) = (prof.tmin(), prof.tmax());
        let margin = TIP_MARGIN * (tmax - tmin);
        let levels = |m: f64| {
            let wm = prof.width(m);
            let target = 0.5 * wm;
            (wm, target, prof.upper_level(m, wm, target), prof.lower_level(m, wm, target))
        };
        // h(m) = (a + b)/2 − m is strictly decreasing in m.
        let (mut lo, mut hi) = (tmin + margin, tmax - margin);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let (_, _, a, b) = levels(mid);
            if 0.5 * (a.offset + b.offset) - mid > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let m = 0.5 * (lo + hi);
        let (_, target, upper, lower) = levels(m);
        let (l, r) = prof.at(m);
        let center_u = 0.5 * (l + r);
        Sample {
            theta,
            m,
            center_u,
            target,
            upper,
            lower,
            defect_lo: upper.lo + lower.lo - 2.0 * center_u,
            defect_hi: upper.hi + lower.hi - 2.0 * center_u,
        }
    }

    fn hexagon(&self, s: &Sample) -> AffineRegularHexagon {
        let u = direction(s.theta);
        let n = u.perp();
        // pick side midpoints with c_a + c_b as close to 2 c_m as the ranges allow
        let sum = 2.0 * s.center_u;
        let lo = s.upper.lo.max(sum - s.lower.hi);
        let hi = s.upper.hi.min(sum - s.lower.lo);
        let ca = (0.5 * (lo + hi)).clamp(s.upper.lo, s.upper.hi);
        let cb = (sum - ca).clamp(s.lower.lo, s.lower.hi);
        let center = u * s.center_u + n * s.m;
        let x = u * (0.5 * s.target);
        let y = u * (0.5 * (ca - cb)) + n * (0.5 * (s.upper.offset - s.lower.offset));
        AffineRegularHexagon::from_axes(center, x, y)
    }

    /// Bisects a bracket whose endpoint defects have opposite signs.
    fn bisect(&self, mut a: Sample, mut b: Sample, ztol: f64) -> Sample {
        let sign_a = a.sign(ztol);
        for _ in 0..BISECTION_STEPS {
            let mid = self.sample(0.5 * (a.theta + b.theta));
            match mid.sign(ztol) {
                0 => return mid,
                s if s == sign_a => a = mid,
                _ => b = mid,
            }
        }
        if a.residual() <= b.residual() { a } else { b }
    }

    /// Golden-section minimisation of the residual on `[lo, hi]`.
    fn golden(&self, mut lo: f64, mut hi: f64) -> Sample {
        let ratio = 0.5 * (5.0_f64.sqrt() - 1.0);
        let mut x1 = hi - ratio * (hi - lo);
        let mut x2 = lo + ratio * (hi - lo);
        let mut s1 = self.sample(x1);
        let mut s2 = self.sample(x2);
        for _ in 0..100 {
            if s1.residual() <= s2.residual() {
                hi = x2;
                x2 = x1;
                s2 = s1;
                x1 = hi - ratio * (hi - lo);
                s1 = self.sample(x1);
            } else {
                lo = x1;
                x1 = x2;
                s1 = s2;
                x2 = lo + ratio * (hi - lo);
                s2 = self.sample(x2);
            }
        }
        if s1.residual() <= s2.residual() { s1 } else { s2 }
    }
}

/// Finds an affine-regular hexagon inscribed in `poly`.
///
/// `tol` bounds the distance of every vertex to the boundary relative to the
/// diameter. Fails with [`Error::Convergence`] when no direction reaches it.
pub fn inscribe_hexagon(poly: &ConvexPolygon, tol: f64) -> Result<AffineRegularHexagon> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let diam = poly.diameter();
    // the defect feeds half into the vertex positions; aim well below `tol`
    let ztol = 1e-3 * tol * diam;
    let search = Search { poly, snap: PLATEAU_SNAP * diam };

    let mut thetas: Vec<f64> = (0..=SCAN_SAMPLES).map(|j| PI * j as f64 / SCAN_SAMPLES as f64).collect();
    thetas.extend(poly.edges().map(|(a, b)| {
        let e = b - a;
        e.y.atan2(e.x).rem_euclid(PI)
    }));
    thetas.sort_by(f64::total_cmp);
    thetas.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let samples: Vec<Sample> = thetas.iter().map(|&t| search.sample(t)).collect();
    let accept = |s: &Sample| -> Option<AffineRegularHexagon> {
        if s.residual() > tol * diam {
            return None;
        }
        let hex = search.hexagon(s);
        let worst = hex.vertices().iter().map(|&v| poly.signed_distance(v).abs()).fold(0.0, f64::max);
        let (sym, reg) = hex.identity_residuals();
        (worst <= tol * diam && sym.max(reg) <= 1e-9 * diam)
            .then_some(hex)
    };

    let mut best = samples[0];
    for (i, s) in samples.iter().enumerate() {
        if s.residual() < best.residual() {
            best = *s;
        }
        if s.sign(ztol) == 0 {
            if let Some(h) = accept(s) {
                return Ok(h);
            }
        }
        if let Some(next) = samples.get(i + 1) {
            let (sa, sb) = (s.sign(ztol), next.sign(ztol));
            if sa != 0 && sb != 0 && sa != sb {
                let root = search.bisect(*s, *next, ztol);
                if root.residual() < best.residual() {
                    best = root;
                }
                if let Some(h) = accept(&root) {
                    return Ok(h);
                }
            }
        }
    }

    let k = samples.iter().position(|s| s.theta == best.theta).unwrap_or(0);
    let lo = samples[k.saturating_sub(1)].theta;
    let hi = samples[(k + 1).min(samples.len() - 1)].theta;
    let refined = search.golden(lo, hi);
    if refined.residual() < best.residual() {
        best = refined;
    }
    accept(&best).ok_or(Error::Convergence { residual: best.residual() / diam })
}
