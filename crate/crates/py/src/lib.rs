//! Python bindings. Every enumeration runs with the GIL released and is
//! refused up front when its `n` range would exceed [`MAX_SCAN_N`].

use linnik::cycles::{closed_geodesic, cycle_value, j_invariant, periods_n_bound, JInvariant, ModularFunction, One};
use linnik::geodesic_enum::{self, Arc, Mode};
use linnik::linnik::{enumerate_w, equid_report as report, n_bound, predicted_count as predicted, validate, ProjInterval};
use linnik::numtheory::pell_fundamental;
use linnik::{IntForm, PointH, RealForm};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

/// Largest `n` a single call may scan.
pub const MAX_SCAN_N: u64 = 50_000_000;

fn err(e: linnik::Error) -> PyErr {
    use linnik::Error as E;
    match e {
        E::GuardExceeded(_) | E::LimitTooLarge(_) | E::NumericalInstability(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn guard(n: u64) -> PyResult<()> {
    if n > MAX_SCAN_N {
        return Err(PyRuntimeError::new_err(format!("enumeration would scan n up to {n} (limit {MAX_SCAN_N})")));
    }
    Ok(())
}

pub fn interval(lo: f64, hi: f64, wrap: bool) -> Result<ProjInterval, linnik::Error> {
    if wrap {
        ProjInterval::wrapping(lo, hi)
    } else {
        ProjInterval::new(lo, hi)
    }
}

fn checked_w(a: f64, b: f64, c: f64, delta: f64, lo: f64, hi: f64, wrap: bool) -> PyResult<(RealForm, ProjInterval)> {
    let f = RealForm::new(a, b, c).map_err(err)?;
    let i = interval(lo, hi, wrap).map_err(err)?;
    let pieces = validate(&f, &i).map_err(err)?;
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(PyValueError::new_err(format!("delta must be finite and non-negative, got {delta}")));
    }
    if delta > 0.0 {
        guard(n_bound(&f, delta, &pieces).map_err(err)?)?;
    }
    Ok((f, i))
}

/// Reduced `(m, n)` with `m/n` in the interval and `0 < F(m,n) <= delta`.
#[pyfunction]
#[pyo3(signature = (a, b, c, delta, lo, hi, wrap = false))]
#[allow(clippy::too_many_arguments)]
fn wset(py: Python<'_>, a: f64, b: f64, c: f64, delta: f64, lo: f64, hi: f64, wrap: bool) -> PyResult<Vec<(i64, i64)>> {
    let (f, i) = checked_w(a, b, c, delta, lo, hi, wrap)?;
    let v = py.detach(|| enumerate_w(&f, delta, &i)).map_err(err)?;
    Ok(v.into_iter().map(|q| (q.m, q.n)).collect())
}

/// The main term `(3/π²) Δ ∫_I dt/F(t)`.
#[pyfunction]
#[pyo3(signature = (a, b, c, delta, lo, hi, wrap = false))]
#[allow(clippy::too_many_arguments)]
fn predicted_count(a: f64, b: f64, c: f64, delta: f64, lo: f64, hi: f64, wrap: bool) -> PyResult<f64> {
    let f = RealForm::new(a, b, c).map_err(err)?;
    let i = interval(lo, hi, wrap).map_err(err)?;
    predicted(&f, delta, &i).map_err(err)
}

/// Counts against the main term, overall and in equal-mass buckets.
#[pyfunction]
#[pyo3(signature = (a, b, c, delta, lo, hi, wrap = false, buckets = 8))]
#[allow(clippy::too_many_arguments)]
fn equid_report<'py>(
    py: Python<'py>,
    a: f64,
    b: f64,
    c: f64,
    delta: f64,
    lo: f64,
    hi: f64,
    wrap: bool,
    buckets: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let (f, i) = checked_w(a, b, c, delta, lo, hi, wrap)?;
    let r = py.detach(|| report(&f, delta, &i, buckets)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("empirical", r.empirical)?;
    d.set_item("predicted", r.predicted)?;
    d.set_item("residual", r.residual)?;
    d.set_item("normalized_residual", r.normalized_residual)?;
    d.set_item("error_scale", r.error_scale)?;
    d.set_item("counts", r.histogram.iter().map(|h| h.count).collect::<Vec<_>>())?;
    d.set_item("bucket_predicted", r.histogram.iter().map(|h| h.predicted).collect::<Vec<_>>())?;
    d.set_item("edges", r.histogram.iter().map(|h| (h.lo, h.hi)).collect::<Vec<_>>())?;
    d.set_item("max_ratio_deviation", r.max_ratio_deviation)?;
    d.set_item("ties", r.ties)?;
    Ok(d)
}

fn form(a: i128, b: i128, c: i128) -> PyResult<IntForm> {
    IntForm::new(a, b, c).map_err(err)
}

fn arc_for(g: &IntForm, lo: Option<f64>, hi: Option<f64>) -> PyResult<Option<Arc>> {
    match (lo, hi) {
        (None, None) => Ok(None),
        (Some(lo), Some(hi)) => Ok(Some(if g.a() == 0 { Arc::Y { lo, hi } } else { Arc::Theta { lo, hi } })),
        _ => Err(PyValueError::new_err("give both lo and hi, or neither")),
    }
}

fn guarded_param(g: &IntForm, mode: Mode, delta: u64, arc: Option<Arc>) -> PyResult<geodesic_enum::GeodesicParam> {
    let param = geodesic_enum::build_param(g, mode).map_err(err)?;
    guard(geodesic_enum::n_bound_for(&param, delta, arc).map_err(err)?)?;
    Ok(param)
}

fn triple(f: &IntForm) -> (i128, i128, i128) {
    f.coefficients()
}

fn z(p: PointH) -> Complex64 {
    Complex64::new(p.x, p.y)
}

/// CM points on the geodesic of `(a, b, c)` with `|D| <= delta`, optionally
/// on the arc `[lo, hi]` (θ on a semicircle, y on a half-line).
#[pyfunction]
#[pyo3(signature = (a, b, c, delta, lo = None, hi = None))]
fn cm_on_geodesic<'py>(
    py: Python<'py>,
    a: i128,
    b: i128,
    c: i128,
    delta: u64,
    lo: Option<f64>,
    hi: Option<f64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let g = form(a, b, c)?;
    let arc = arc_for(&g, lo, hi)?;
    let param = guarded_param(&g, Mode::CmOnGeodesic, delta, arc)?;
    let recs = py.detach(|| geodesic_enum::enum_cm_on_param(&param, delta, arc)).map_err(err)?;
    recs.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("m", r.t.m)?;
            d.set_item("n", r.t.n)?;
            d.set_item("form", triple(&r.point.form))?;
            d.set_item("disc", r.point.disc)?;
            d.set_item("z", z(r.point.z))?;
            d.set_item("coord", r.coord)?;
            Ok(d)
        })
        .collect()
}

/// RM curves meeting the geodesic of `(a, b, c)` at right angles.
#[pyfunction]
#[pyo3(signature = (a, b, c, delta, lo = None, hi = None))]
fn rm_perp_geodesic<'py>(
    py: Python<'py>,
    a: i128,
    b: i128,
    c: i128,
    delta: u64,
    lo: Option<f64>,
    hi: Option<f64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let g = form(a, b, c)?;
    let arc = arc_for(&g, lo, hi)?;
    guarded_param(&g, Mode::RmPerpGeodesic, delta, arc)?;
    let recs = py.detach(|| geodesic_enum::enum_rm_perp_geodesic(&g, delta, arc)).map_err(err)?;
    recs.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("m", r.t.m)?;
            d.set_item("n", r.t.n)?;
            d.set_item("form", triple(&r.curve.form))?;
            d.set_item("disc", r.curve.disc)?;
            d.set_item("center", r.curve.center)?;
            d.set_item("radius", r.curve.radius)?;
            d.set_item("foot", z(r.foot))?;
            d.set_item("coord", r.coord)?;
            Ok(d)
        })
        .collect()
}

/// RM curves through the CM point of the definite form `(a, b, c)`.
#[pyfunction]
fn rm_through_point<'py>(py: Python<'py>, a: i128, b: i128, c: i128, delta: u64) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let g = form(a, b, c)?;
    guarded_param(&g, Mode::RmThroughPoint, delta, None)?;
    let recs = py.detach(|| geodesic_enum::enum_rm_through_point(&g, delta)).map_err(err)?;
    recs.iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("m", r.t.m)?;
            d.set_item("n", r.t.n)?;
            d.set_item("form", triple(&r.curve.form))?;
            d.set_item("disc", r.curve.disc)?;
            d.set_item("center", r.curve.center)?;
            d.set_item("radius", r.curve.radius)?;
            d.set_item("angle", r.angle)?;
            Ok(d)
        })
        .collect()
}

/// Normalized CM averages of `function` ("one" or "j") along the closed
/// geodesic of `(a, b, c)`, with the cycle integral by quadrature.
#[pyfunction]
#[pyo3(signature = (a, b, c, function = "one", ladder = vec![10_000, 100_000, 1_000_000]))]
fn cycle<'py>(
    py: Python<'py>,
    a: i128,
    b: i128,
    c: i128,
    function: &str,
    ladder: Vec<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let g = form(a, b, c)?;
    let f: &dyn ModularFunction = match function {
        "one" => &One,
        "j" => &JInvariant,
        other => return Err(PyValueError::new_err(format!("function must be 'one' or 'j', got {other:?}"))),
    };
    let cg = closed_geodesic(&g).map_err(err)?;
    for &delta in &ladder {
        guard(periods_n_bound(&cg, delta, 1).map_err(err)?)?;
    }
    let v = py.detach(|| cycle_value(f, &g, &ladder)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("length", v.length)?;
    d.set_item(
        "estimates",
        v.estimates.iter().map(|e| (e.delta, e.count, Complex64::new(e.re, e.im))).collect::<Vec<_>>(),
    )?;
    d.set_item("quadrature", Complex64::new(v.classical_re, v.classical_im))?;
    Ok(d)
}

/// Fundamental solution `(t, u)` of `t² − D u² = 4`.
#[pyfunction]
fn pell(d: i128) -> PyResult<(num_bigint::BigUint, num_bigint::BigUint)> {
    let s = pell_fundamental(d).map_err(err)?;
    Ok((s.t0, s.u0))
}

/// Klein's `j` at a point of the upper half-plane.
#[pyfunction]
fn j(z: Complex64) -> PyResult<Complex64> {
    Ok(j_invariant(PointH::new(z.re, z.im).map_err(err)?))
}

/// Adds the functions to `m`; shared by the extension entry point and by
/// embedded interpreters.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MAX_SCAN_N", MAX_SCAN_N)?;
    m.add_function(wrap_pyfunction!(wset, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_count, m)?)?;
    m.add_function(wrap_pyfunction!(equid_report, m)?)?;
    m.add_function(wrap_pyfunction!(cm_on_geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(rm_perp_geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(rm_through_point, m)?)?;
    m.add_function(wrap_pyfunction!(cycle, m)?)?;
    m.add_function(wrap_pyfunction!(pell, m)?)?;
    m.add_function(wrap_pyfunction!(j, m)?)?;
    Ok(())
}

#[pymodule]
#[pyo3(name = "linnik")]
fn linnik_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
