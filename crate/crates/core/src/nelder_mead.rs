//! Derivative-free simplex minimisation.

/// Result of a simplex run: best point seen and its value.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Minimises `f` starting from `x0` with an axis-aligned initial simplex of
/// the given per-coordinate `step`. Runs at most `max_iters` iterations and
/// stops early once the simplex values agree to `ftol` (absolute).
///
/// Non-finite values are treated as `+∞`, so constraints can be imposed by
/// returning `f64::INFINITY` outside the feasible set.
pub fn minimize<F>(mut f: F, x0: &[f64], step: &[f64], max_iters: usize, ftol: f64) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert_eq!(step.len(), n, "one step per coordinate");
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() { v } else { f64::INFINITY }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step[i];
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    while iterations < max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[n].1);
        if worst.is_finite() && (worst - best).abs() <= ftol {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> =
            (0..n).map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (w - c)).collect()
        };

        let xr = along(-1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let x = along(-0.5);
            let v = eval(&x);
            (x, v)
        } else {
            let x = along(0.5);
            let v = eval(&x);
            (x, v)
        };
        if fc < fr.min(simplex[n].1) {
            simplex[n] = (xc, fc);
            continue;
        }
        // shrink towards the best vertex
        let x0 = simplex[0].0.clone();
        for (x, v) in simplex.iter_mut().skip(1) {
            for (xi, bi) in x.iter_mut().zip(&x0) {
                *xi = bi + 0.5 * (*xi - bi);
            }
            *v = eval(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = minimize(f, &[-1.2, 1.0], &[0.1, 0.1], 2000, 1e-14);
        assert!((m.x[0] - 1.0).abs() < 1e-4 && (m.x[1] - 1.0).abs() < 1e-4, "{m:?}");
    }

    #[test]
    fn respects_infeasible_region() {
        // minimum of x² subject to x ≥ 1
        let f = |x: &[f64]| if x[0] < 1.0 { f64::INFINITY } else { x[0] * x[0] };
        let m = minimize(f, &[3.0], &[0.5], 500, 1e-14);
        assert!((m.x[0] - 1.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn never_returns_worse_than_start() {
        let f = |x: &[f64]| (x[0] * 7.0).sin() + x[1].abs();
        let x0 = [0.3, 0.2];
        let m = minimize(f, &x0, &[0.05, 0.05], 50, 0.0);
        assert!(m.value <= f(&x0));
    }
}
