//! Python bindings. Polygons go in as JSON text (`{"vertices": [[x, y], ...]}`
//! or a bare list of pairs) and results come back as JSON text.

use cbm_core::certify::{analyze_f_on_domain, analyze_g_on_q};
use cbm_core::estimate::{estimate_cen, estimate_extended, pentagon_triangle_witness, Budget, EstimatorConfig, Mode};
use cbm_core::hexagon::{check_centroid_lemma, HexagonResiduals, DEFAULT_INSCRIBE_TOL};
use cbm_core::witness::{construct_with, WitnessOptions, DEFAULT_VERIFY_TOL};
use cbm_core::{io, render, ConvexPolygon, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::json;

create_exception!(cbm, VerificationError, PyRuntimeError, "A construction or certificate failed its own checks.");

fn to_py(e: Error) -> PyErr {
    let msg = format!("{}: {}", e.kind(), e);
    if e.is_verification_failure() {
        VerificationError::new_err(msg)
    } else {
        PyValueError::new_err(msg)
    }
}

fn polygon(text: &str) -> PyResult<ConvexPolygon> {
    io::parse_polygon(text).map_err(to_py)
}

fn dump<T: serde::Serialize>(value: &T) -> PyResult<String> {
    io::to_json(value).map_err(to_py)
}

/// Affine-regular hexagon inscribed in the polygon, with residuals and the centroid check.
#[pyfunction]
#[pyo3(signature = (polygon_json, tol = DEFAULT_INSCRIBE_TOL))]
fn inscribe(py: Python<'_>, polygon_json: &str, tol: f64) -> PyResult<String> {
    let poly = polygon(polygon_json)?;
    let (hexagon, residuals, lemma) = py
        .detach(|| {
            let hexagon = cbm_core::inscribe_hexagon(&poly, tol)?;
            let residuals = HexagonResiduals::measure(&poly, &hexagon);
            let lemma = check_centroid_lemma(&poly, &hexagon);
            Ok((hexagon, residuals, lemma))
        })
        .map_err(to_py)?;
    dump(&json!({ "hexagon": hexagon, "residuals": residuals, "lemma": lemma }))
}

/// Witness maps for the pair. Returns `{"witness": ..., "trace": ...}`.
#[pyfunction]
#[pyo3(signature = (c_json, d_json, tighten = false, tol = DEFAULT_VERIFY_TOL))]
fn witness(py: Python<'_>, c_json: &str, d_json: &str, tighten: bool, tol: f64) -> PyResult<String> {
    let (c, d) = (polygon(c_json)?, polygon(d_json)?);
    let (w, trace) = py.detach(|| construct_with(&c, &d, &WitnessOptions { tol, tighten })).map_err(to_py)?;
    dump(&json!({ "witness": w, "trace": trace }))
}

#[pyfunction]
#[pyo3(signature = (grid = 512, samples = 1_000_000, refine_iters = 200, seed = 0x6917))]
fn certify(py: Python<'_>, grid: usize, samples: usize, refine_iters: usize, seed: u64) -> PyResult<String> {
    let (rectangle, domain) = py
        .detach(|| Ok::<_, Error>((analyze_g_on_q(grid)?, analyze_f_on_domain(samples, refine_iters, seed)?)))
        .map_err(to_py)?;
    let certified = rectangle.certified && domain.certified;
    dump(&json!({ "rectangle": rectangle, "domain": domain, "certified": certified }))
}

/// Upper bound on the distance. `mode` is "cen" or "extended", `budget` is "low", "default" or "high".
#[pyfunction]
#[pyo3(signature = (c_json, d_json, mode = "cen", budget = "default"))]
fn estimate(py: Python<'_>, c_json: &str, d_json: &str, mode: &str, budget: &str) -> PyResult<String> {
    let (c, d) = (polygon(c_json)?, polygon(d_json)?);
    let mode = match mode {
        "cen" => Mode::Cen,
        "extended" => Mode::Extended,
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    let budget = match budget {
        "low" => Budget::Low,
        "default" => Budget::Default,
        "high" => Budget::High,
        other => return Err(PyValueError::new_err(format!("unknown budget {other:?}"))),
    };
    let config = EstimatorConfig::new(budget, mode);
    let result = py
        .detach(|| match mode {
            Mode::Cen => estimate_cen(&c, &d, &config),
            Mode::Extended => estimate_extended(&c, &d, &config),
        })
        .map_err(to_py)?;
    dump(&result)
}

#[pyfunction]
fn pentagon_triangle() -> PyResult<String> {
    dump(&pentagon_triangle_witness().map_err(to_py)?)
}

/// Seeded random convex polygon with at most `n` vertices.
#[pyfunction]
#[pyo3(signature = (n, seed = 0))]
fn gen(n: usize, seed: u64) -> PyResult<String> {
    dump(&cbm_core::random_convex_polygon(n, seed).map_err(to_py)?)
}

/// SVG of a construction trace (JSON), or of the pentagon–triangle pair when no trace is given.
#[pyfunction]
#[pyo3(signature = (trace_json = None))]
fn render_svg(trace_json: Option<&str>) -> PyResult<String> {
    match trace_json {
        Some(text) => {
            let trace = serde_json::from_str(text).map_err(|e| PyValueError::new_err(format!("invalid trace: {e}")))?;
            Ok(render::render_trace(&trace))
        }
        None => Ok(render::render_pentagon_triangle(&pentagon_triangle_witness().map_err(to_py)?)),
    }
}

#[pymodule]
fn cbm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BOUND", cbm_core::BOUND)?;
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    m.add_function(wrap_pyfunction!(inscribe, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    m.add_function(wrap_pyfunction!(pentagon_triangle, m)?)?;
    m.add_function(wrap_pyfunction!(gen, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    Ok(())
}
