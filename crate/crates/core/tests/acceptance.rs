//! Acceptance criteria 1–8. Each criterion is its own test and prints one
//! PASS/FAIL line. A lock serialises them so the wall-clock limits are not
//! distorted by the other criteria running alongside.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use cbm_core::certify::{certify_g_max_on_q, maximize_f_on_domain, Argmax};
use cbm_core::estimate::{estimate_cen, pentagon_triangle_witness, Budget, EstimatorConfig, Mode};
use cbm_core::hexagon::{check_centroid_lemma, HexagonResiduals, DEFAULT_INSCRIBE_TOL};
use cbm_core::normalize::{in_triangle_t, in_triangle_t_plus, tau, FundamentalDomains};
use cbm_core::witness::{construct, enlargement, point_d1, DEFAULT_VERIFY_TOL};
use cbm_core::{inscribe_hexagon, random_convex_polygon, AffineMap, AffineRegularHexagon, ConvexPolygon, Error, Point, Star, BOUND};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static SERIAL: Mutex<()> = Mutex::new(());

fn report(n: u32, name: &str, failures: &[String], detail: &str) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n} ({name}): {status}: {detail}");
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {} problem(s), first: {}", failures.len(), failures[0]);
}

fn within(elapsed: Duration, limit_secs: u64, failures: &mut Vec<String>) {
    if elapsed > Duration::from_secs(limit_secs) {
        failures.push(format!("runtime {elapsed:?} exceeds {limit_secs} s"));
    }
}

/// The 500 polygons of criteria 4 and 5: 3 to 40 sampled points each.
fn polygon(seed: u64) -> ConvexPolygon {
    random_convex_polygon(3 + (seed as usize * 7) % 38, seed).unwrap()
}

fn pair(seed: u64) -> (ConvexPolygon, ConvexPolygon) {
    (
        random_convex_polygon(3 + (seed as usize * 13) % 38, 2 * seed).unwrap(),
        random_convex_polygon(3 + (seed as usize * 7) % 38, 2 * seed + 1).unwrap(),
    )
}

fn sample_in(rng: &mut ChaCha8Rng, tri: [Point; 3]) -> Point {
    let (mut a, mut b) = (rng.random::<f64>(), rng.random::<f64>());
    if a + b > 1.0 {
        (a, b) = (1.0 - a, 1.0 - b);
    }
    tri[0] + (tri[1] - tri[0]) * a + (tri[2] - tri[0]) * b
}

#[test]
fn criterion_1_bound_certification() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let result = certify_g_max_on_q(512);
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    let detail = match result {
        Ok(r) => {
            if (r.max_value - BOUND).abs() > 1e-12 {
                failures.push(format!("max {} differs from 69/17", r.max_value));
            }
            if r.argmax != Argmax::Rectangle(Point::new(0.0, 2.0 / 7.0)) {
                failures.push(format!("argmax {:?}", r.argmax));
            }
            let expected = [3.0, 11.0 / 5.0, 69.0 / 17.0, 253.0 / 85.0];
            for (c, e) in r.corner_table.iter().zip(expected) {
                if (c.value - e).abs() > 1e-12 {
                    failures.push(format!("corner {} = {} (expected {e})", c.label, c.value));
                }
            }
            if !r.interior_critical_points.is_empty() || !r.edge_extrema.is_empty() {
                failures.push("critical point lists are not empty".into());
            }
            if r.grid_residual > 1e-12 {
                failures.push(format!("grid residual {:e}", r.grid_residual));
            }
            format!("max {:.11} at (0, 2/7), residual {:e}, {:?}", r.max_value, r.grid_residual, elapsed)
        }
        Err(e) => {
            failures.push(e.to_string());
            String::new()
        }
    };
    within(elapsed, 5, &mut failures);
    report(1, "bound certification", &failures, &detail);
}

#[test]
fn criterion_2_four_dimensional_maximum() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let result = maximize_f_on_domain(1_000_000, 200);
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    let detail = match result {
        Ok(r) => {
            if r.max_value > BOUND + 1e-9 {
                failures.push(format!("max {} above 69/17", r.max_value));
            }
            match r.argmax {
                Argmax::Domain(x) => {
                    let d = [0.0, 0.0, 2.0 / 7.0, 0.0].iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                    if d > 1e-3 {
                        failures.push(format!("argmax {x:?} is {d:e} from (0, 0, 2/7, 0)"));
                    }
                }
                other => failures.push(format!("unexpected argmax {other:?}")),
            }
            for m in r.monotonicity_checks.iter().filter(|m| !m.passed) {
                failures.push(format!("monotonicity {} failed", m.name));
            }
            format!("max {:.12} over {} samples, {:?}", r.max_value, r.samples, elapsed)
        }
        Err(e) => {
            failures.push(e.to_string());
            String::new()
        }
    };
    within(elapsed, 30, &mut failures);
    report(2, "4D maximisation", &failures, &detail);
}

#[test]
fn criterion_3_witness_pipeline() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut lambdas = Vec::new();
    let mut admitted: Vec<f64> = Vec::new();
    for seed in 0..500 {
        let (c, d) = pair(seed);
        match construct(&c, &d, DEFAULT_VERIFY_TOL) {
            Ok((w, trace)) => {
                admitted.extend(trace.admitted_ratio);
                let check = w.verify(&c, &d, DEFAULT_VERIFY_TOL).unwrap();
                let ca = w.alpha.map_polygon(&c).centroid();
                let cb = w.beta.map_polygon(&d).centroid();
                if !check.holds {
                    failures.push(format!("seed {seed}: containments fail {check:?}"));
                }
                if ca.distance(cb) > 1e-9 {
                    failures.push(format!("seed {seed}: centroids differ by {:e}", ca.distance(cb)));
                }
                if w.lambda > BOUND + 1e-9 {
                    failures.push(format!("seed {seed}: lambda {}", w.lambda));
                }
                lambdas.push(w.lambda);
            }
            Err(Error::ProofViolation { detail, trace }) => {
                admitted.extend(trace.admitted_ratio);
                failures.push(format!("seed {seed}: {detail}"));
            }
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, 60, &mut failures);
    lambdas.sort_by(f64::total_cmp);
    let max_admitted = admitted.iter().copied().fold(0.0, f64::max);
    let detail = format!(
        "{} of 500 pairs constructed, lambda range [{:.4}, {:.4}], median {:.4}; ratio admitted by the maps at most {:.4} over {} pairs; {:?}",
        lambdas.len(),
        lambdas.first().copied().unwrap_or(f64::NAN),
        lambdas.last().copied().unwrap_or(f64::NAN),
        lambdas.get(lambdas.len() / 2).copied().unwrap_or(f64::NAN),
        max_admitted,
        admitted.len(),
        elapsed
    );
    report(3, "witness pipeline", &failures, &detail);
}

#[test]
fn criterion_4_hexagon_inscription() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    for seed in 0..500 {
        let poly = polygon(seed);
        match inscribe_hexagon(&poly, DEFAULT_INSCRIBE_TOL) {
            Ok(h) => {
                let r = HexagonResiduals::measure(&poly, &h);
                worst = worst.max(r.max()).max(r.outside);
                if r.max() > 1e-7 || r.outside > 1e-7 {
                    failures.push(format!("seed {seed}: residuals {r:?}"));
                }
            }
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    // third-point hexagon of a triangle, up to relabelling
    let tri = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap();
    let expected = [(1.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 2.0), (0.0, 2.0), (0.0, 1.0)].map(|(x, y)| Point::new(x / 3.0, y / 3.0));
    let mut tri_err = f64::INFINITY;
    match inscribe_hexagon(&tri, DEFAULT_INSCRIBE_TOL) {
        Ok(h) => {
            tri_err = h.center().distance(Point::new(1.0 / 3.0, 1.0 / 3.0));
            for v in h.vertices() {
                let nearest = expected.iter().map(|e| e.distance(*v)).fold(f64::INFINITY, f64::min);
                tri_err = tri_err.max(nearest);
            }
            if tri_err > 1e-9 {
                failures.push(format!("triangle hexagon off by {tri_err:e}: {h:?}"));
            }
        }
        Err(e) => failures.push(format!("triangle: {e}")),
    }
    let elapsed = start.elapsed();
    within(elapsed, 30, &mut failures);
    report(4, "hexagon inscription", &failures, &format!("worst residual {worst:e}, triangle error {tri_err:e}, {elapsed:?}"));
}

#[test]
fn criterion_5_centroid_lemma() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut failures = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..500 {
        let poly = polygon(seed);
        match inscribe_hexagon(&poly, DEFAULT_INSCRIBE_TOL) {
            Ok(h) => {
                let l = check_centroid_lemma(&poly, &h);
                let margin = l.margin / poly.diameter();
                worst = worst.max(margin);
                if !l.holds || margin > 1e-9 {
                    failures.push(format!("seed {seed}: centroid outside the 4/21 hexagon by {margin:e}"));
                }
            }
            Err(e) => failures.push(format!("seed {seed}: {e}")),
        }
    }
    report(5, "centroid lemma", &failures, &format!("largest relative margin {worst:e}"));
}

#[test]
fn criterion_6_pentagon_triangle() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut failures = Vec::new();
    let w = pentagon_triangle_witness().unwrap();
    let tol = 1e-9;
    if !(w.pentagon.contains_polygon(&w.triangle, tol) && w.enlarged.contains_polygon(&w.pentagon, tol)) {
        failures.push("T ⊆ P ⊆ T* does not verify".into());
    }
    if w.centroid_offset > 1e-12 {
        failures.push(format!("centroids off the origin by {:e}", w.centroid_offset));
    }
    if (w.lambda - (7.0 - 5f64.sqrt()) / 2.0).abs() > 1e-15 {
        failures.push(format!("ratio {}", w.lambda));
    }
    let est = estimate_cen(&w.pentagon, &w.triangle, &EstimatorConfig::new(Budget::Default, Mode::Cen)).unwrap();
    if !est.verified || est.lambda_hat > 2.383 {
        failures.push(format!("estimate {} (verified {})", est.lambda_hat, est.verified));
    }
    report(6, "pentagon-triangle", &failures, &format!("witness ratio {:.7}, estimate {:.7}", w.lambda, est.lambda_hat));
}

#[test]
fn criterion_7_parallelogram_triangle() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut failures = Vec::new();
    let square = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)]).unwrap();
    let triangle = ConvexPolygon::new(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap();
    let mut values = Vec::new();
    for (budget, lo, hi) in [(Budget::Default, 2.499, 2.55), (Budget::High, 2.4999, 2.51)] {
        let r = estimate_cen(&square, &triangle, &EstimatorConfig::new(budget, Mode::Cen)).unwrap();
        if !r.verified || r.lambda_hat < lo || r.lambda_hat > hi {
            failures.push(format!("{budget:?}: {} not in [{lo}, {hi}] (verified {})", r.lambda_hat, r.verified));
        }
        values.push(format!("{budget:?} {:.9}", r.lambda_hat));
    }
    report(7, "parallelogram-triangle", &failures, &values.join(", "));
}

#[test]
fn criterion_8_tau_and_identities() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut failures = Vec::new();
    let (t, tp) = (FundamentalDomains::t(), FundamentalDomains::t_plus());
    let mut vertex_err = 0.0_f64;
    for v in t {
        let image = tau(v);
        vertex_err = vertex_err.max(tp.iter().map(|w| w.distance(image)).fold(f64::INFINITY, f64::min));
    }
    if vertex_err > 1e-15 {
        failures.push(format!("tau misses the vertices of T⁺ by {vertex_err:e}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10_000 {
        let x = sample_in(&mut rng, t);
        if !in_triangle_t(x) || !in_triangle_t_plus(tau(x)) {
            failures.push(format!("tau({x:?}) = {:?} is not in T⁺", tau(x)));
        }
    }

    let mut star_err = 0.0_f64;
    for _ in 0..1000 {
        let mut m = || rng.random::<f64>() * 4.0 - 2.0;
        let Ok(map) = AffineMap::new(m(), m(), m(), m(), m(), m()) else { continue };
        let h = AffineRegularHexagon::canonical().transformed(&map);
        let star = Star::over(&h);
        let scale = h.diameter();
        for i in 1..=6 {
            let w = h.vertex(i - 1) + h.vertex(i) - h.center();
            star_err = star_err.max(w.distance(star.outer_vertex(i)) / scale);
        }
    }
    if star_err > 1e-12 {
        failures.push(format!("star identity off by {star_err:e}"));
    }

    let mut first_coord_err = 0.0_f64;
    for _ in 0..100_000 {
        let pq = sample_in(&mut rng, t);
        let rs = sample_in(&mut rng, tp);
        let d1 = point_d1(pq.x, rs.x, rs.y);
        let c1 = 1.5 - pq.x;
        let rho = enlargement(pq.x, rs.x);
        first_coord_err = first_coord_err.max((d1.x - c1).abs()).max((c1 - rho * (1.5 - rs.x)).abs());
    }
    if first_coord_err > 1e-12 {
        failures.push(format!("d″₁ and c̄′₁ first coordinates differ by {first_coord_err:e}"));
    }
    report(
        8,
        "tau and domain constants",
        &failures,
        &format!("vertex error {vertex_err:e}, star error {star_err:e}, first-coordinate error {first_coord_err:e}"),
    );
}
