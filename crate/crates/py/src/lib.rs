//! Python bindings for the dragonfold core: model parameters, curve
//! generation, both intersection detectors, the simple-arc certificate, and
//! the critical constants.
//!
//! Reports cross the boundary as plain dicts and lists — the same shapes the
//! CLI prints as JSON — so Python callers get stable, serializable data
//! rather than opaque handles. Vertices and anchor points are Python
//! `complex` values.

use dragonfold::certify::{certify as certify_impl, CertifyConfig, Verdict};
use dragonfold::ifs::{curve as curve_impl, ModelParams};
use dragonfold::intersect::{
    brute_force, first_bad_order as first_bad_impl, sweep, IntersectionReport,
};
use dragonfold::roots::solve_constants;
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pythonize::pythonize;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Model parameters for one unfolding angle θ = π − 2ξ.
///
/// Construct with exactly one keyword: `Params(xi=...)` (radians, in
/// [0, π/3)) or `Params(theta_deg=...)` (degrees, in (60, 180]).
#[pyclass(frozen)]
#[derive(Clone, Copy)]
struct Params {
    inner: ModelParams,
}

#[pymethods]
impl Params {
    #[new]
    #[pyo3(signature = (*, xi=None, theta_deg=None))]
    fn new(xi: Option<f64>, theta_deg: Option<f64>) -> PyResult<Self> {
        let inner = match (xi, theta_deg) {
            (Some(xi), None) => ModelParams::from_xi(xi),
            (None, Some(deg)) => ModelParams::from_theta_deg(deg),
            _ => return Err(PyValueError::new_err("give exactly one of xi= or theta_deg=")),
        }
        .map_err(value_err)?;
        Ok(Params { inner })
    }

    /// Half-complement angle ξ = (π − θ)/2, radians.
    #[getter]
    fn xi(&self) -> f64 {
        self.inner.xi
    }

    /// Unfolding angle θ in degrees.
    #[getter]
    fn theta_deg(&self) -> f64 {
        self.inner.theta_deg()
    }

    /// Side ratio x = 2 cos ξ; each map contracts by 1/x.
    #[getter]
    fn x(&self) -> f64 {
        self.inner.x
    }

    /// Similarity ratio α = e^{−iξ}/x of the first map.
    #[getter]
    fn alpha(&self) -> Complex64 {
        self.inner.alpha
    }

    /// The corner point z₀ = α/(1 − |α|⁴) shared by the certificate regions.
    #[getter]
    fn z0(&self) -> Complex64 {
        self.inner.z0()
    }

    fn __repr__(&self) -> String {
        format!("Params(xi={:?})", self.inner.xi)
    }
}

/// Vertices of the order-`order` broken line, as a list of complex numbers.
///
/// The list has 2^order + 1 entries and runs from 0 to 1; each segment has
/// length x^(−order).
#[pyfunction]
fn curve(params: &Params, order: u32) -> PyResult<Vec<Complex64>> {
    let poly = curve_impl(&params.inner, order).map_err(value_err)?;
    Ok(poly.vertices().to_vec())
}

fn report_to_py(py: Python<'_>, report: &IntersectionReport) -> PyResult<PyObject> {
    Ok(pythonize(py, report)?.unbind())
}

/// Self-intersection report for the order-`order` broken line, as a dict.
///
/// `engine` is "sweep" (default), "brute", or "both"; "both" runs the two
/// detectors and raises RuntimeError if they disagree. The dict mirrors the
/// CLI's `check --format json` output: keys `schema`, `order`, `xi`,
/// `n_segments`, `self_intersective`, and `events` (a list of dicts with
/// `seg_i`, `seg_j`, `x`, `y`, `kind`, `gap`).
#[pyfunction]
#[pyo3(signature = (params, order, *, tol=1e-9, engine="sweep"))]
fn check(
    py: Python<'_>,
    params: &Params,
    order: u32,
    tol: f64,
    engine: &str,
) -> PyResult<PyObject> {
    let p = &params.inner;
    let poly = curve_impl(p, order).map_err(value_err)?;
    let report = match engine {
        "sweep" => sweep(&poly, tol),
        "brute" => brute_force(&poly, tol).map_err(value_err)?,
        "both" => {
            let b = brute_force(&poly, tol).map_err(value_err)?;
            let s = sweep(&poly, tol);
            let key = |r: &IntersectionReport| {
                r.events.iter().map(|e| (e.seg_i, e.seg_j, e.kind)).collect::<Vec<_>>()
            };
            if key(&b) != key(&s) {
                return Err(PyRuntimeError::new_err(format!(
                    "detector disagreement at order {order}: brute found {} events, sweep {}",
                    b.events.len(),
                    s.events.len()
                )));
            }
            s
        }
        other => {
            return Err(PyValueError::new_err(format!(
                "engine must be \"sweep\", \"brute\", or \"both\", got {other:?}"
            )))
        }
    };
    report_to_py(py, &report.with_curve_info(order, p.xi))
}

/// Report for the smallest order in 1..=k_max whose broken line
/// self-intersects (its `order` key tells you which), or None if every
/// order up to k_max is clean.
#[pyfunction]
#[pyo3(signature = (params, k_max, *, tol=1e-9))]
fn first_bad_order(
    py: Python<'_>,
    params: &Params,
    k_max: u32,
    tol: f64,
) -> PyResult<Option<PyObject>> {
    match first_bad_impl(&params.inner, k_max, tol).map_err(value_err)? {
        Some(report) => Ok(Some(report_to_py(py, &report)?)),
        None => Ok(None),
    }
}

/// Run the numeric simple-arc certificate at this angle; returns the full
/// report as a dict (same shape as the CLI's `certify` output), with
/// `overall` equal to "certified_simple_arc" or "not_certified".
///
/// Only ξ in (0, π/4) is accepted; ValueError otherwise. `depth` is the
/// index of the deepest spiral piece kept before the tail is covered by
/// balls, `samples` the number of interior probes per polygon edge.
#[pyfunction]
#[pyo3(signature = (params, *, depth=40, samples=3, tol=1e-9, cone_search=false))]
fn certify(
    py: Python<'_>,
    params: &Params,
    depth: u32,
    samples: u32,
    tol: f64,
    cone_search: bool,
) -> PyResult<PyObject> {
    let cfg = CertifyConfig { n_max: depth, samples, tol, cone_search };
    let report = certify_impl(params.inner.xi, &cfg).map_err(value_err)?;
    Ok(pythonize(py, &report)?.unbind())
}

/// True iff `certify` ends in the positive verdict at this angle.
#[pyfunction]
#[pyo3(signature = (params, *, depth=40, samples=3, tol=1e-9))]
fn is_certified(params: &Params, depth: u32, samples: u32, tol: f64) -> PyResult<bool> {
    let cfg = CertifyConfig { n_max: depth, samples, tol, cone_search: false };
    let report = certify_impl(params.inner.xi, &cfg).map_err(value_err)?;
    Ok(report.overall == Verdict::CertifiedSimpleArc)
}

/// The critical constants as a dict: `x0` (root of x⁶ − 3x⁴ + 2x² − 1
/// on (√2, φ)), `xi0` = arccos(x0/2), `theta0_rad`, `theta0_deg`, and the
/// polished residual |P(x0)|.
#[pyfunction]
#[pyo3(signature = (*, tol=1e-14))]
fn constants(py: Python<'_>, tol: f64) -> PyResult<PyObject> {
    let c = solve_constants(tol).map_err(value_err)?;
    Ok(pythonize(py, &c)?.unbind())
}

#[pymodule]
fn dragonfold_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Params>()?;
    m.add_function(wrap_pyfunction!(curve, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(first_bad_order, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(is_certified, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add("DEFAULT_TOL", 1e-9)?;
    Ok(())
}
