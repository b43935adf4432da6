//! Python bindings. Exact rationals cross over as `fractions.Fraction`,
//! big integers as Python `int`, and reports as plain dicts.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use quartic_a3::{arithfun, density, surface, torsor, verify, Error, ExactRational};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Quadrature(_) | Error::TorsorInvariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &ExactRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.numer().clone(), q.denom().clone()))
}

/// Round-trips a serializable report through JSON into Python objects.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(x).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.getattr("loads")?.call1((s,))
}

#[pyclass(name = "SurfacePoint", module = "quartic_a3", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PySurfacePoint(surface::SurfacePoint);

#[pymethods]
impl PySurfacePoint {
    /// Normalizes `coords` to the primitive representative whose first
    /// nonzero coordinate is positive.
    #[new]
    fn new(coords: [BigInt; 5]) -> PyResult<Self> {
        surface::SurfacePoint::normalized(coords)
            .map(PySurfacePoint)
            .map_err(py_err)
    }

    #[getter]
    fn coords(&self) -> Vec<BigInt> {
        self.0.coords().to_vec()
    }

    fn height(&self) -> BigInt {
        surface::height(&self.0)
    }

    fn in_counting_region(&self) -> bool {
        surface::in_counting_region(&self.0)
    }

    fn mirror(&self) -> Self {
        PySurfacePoint(self.0.mirror())
    }

    fn lift(&self) -> PyResult<PyTorsorPoint> {
        torsor::lift(&self.0).map(PyTorsorPoint).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        let c: Vec<String> = self.0.coords().iter().map(|x| x.to_string()).collect();
        format!("SurfacePoint({})", c.join(", "))
    }
}

#[pyclass(name = "TorsorPoint", module = "quartic_a3", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyTorsorPoint(torsor::TorsorPoint);

#[pymethods]
impl PyTorsorPoint {
    /// `eta = (η₁, …, η₇)`, `alpha = (α₁, α₂, α₄)`.
    #[new]
    fn new(eta: [BigInt; 7], alpha: [BigInt; 3]) -> Self {
        PyTorsorPoint(torsor::TorsorPoint::new(eta, alpha))
    }

    #[getter]
    fn eta(&self) -> Vec<BigInt> {
        self.0.eta.to_vec()
    }

    #[getter]
    fn alpha(&self) -> Vec<BigInt> {
        self.0.alpha.to_vec()
    }

    fn alpha3(&self) -> Option<BigInt> {
        self.0.alpha3()
    }

    fn check_equations(&self) -> bool {
        torsor::check_equations(&self.0)
    }

    fn check_coprimality(&self) -> bool {
        torsor::check_coprimality(&self.0)
    }

    fn check_heights(&self, bound: u64) -> bool {
        torsor::check_heights(&self.0, bound)
    }

    fn to_point(&self) -> PyResult<PySurfacePoint> {
        torsor::to_point(&self.0).map(PySurfacePoint).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        let j = |xs: &[BigInt]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        format!("TorsorPoint(eta=[{}], alpha=[{}])", j(&self.0.eta), j(&self.0.alpha))
    }
}

/// `N(B)` by direct search.
#[pyfunction]
fn count_direct(py: Python<'_>, bound: u64) -> PyResult<u64> {
    py.detach(|| surface::count_direct(bound))
        .map(|r| r.count)
        .map_err(py_err)
}

/// `#T(B)`; the point count is twice this.
#[pyfunction]
fn count_torsor(py: Python<'_>, bound: u64) -> PyResult<u64> {
    py.detach(|| torsor::count(bound)).map_err(py_err)
}

#[pyfunction]
fn torsor_points(py: Python<'_>, bound: u64) -> PyResult<Vec<PyTorsorPoint>> {
    let pts = py.detach(|| torsor::points(bound)).map_err(py_err)?;
    Ok(pts.into_iter().map(PyTorsorPoint).collect())
}

#[pyfunction]
fn g1(t7: f64, t6: f64) -> PyResult<f64> {
    density::g1(t7, t6).map_err(py_err)
}

/// `(value, error)`.
#[pyfunction]
#[pyo3(signature = (tol = 1e-8))]
fn omega_infty(py: Python<'_>, tol: f64) -> PyResult<(f64, f64)> {
    let e = py.detach(|| density::omega_infty(tol)).map_err(py_err)?;
    Ok((e.value, e.error))
}

/// `(mean, standard error)`.
#[pyfunction]
#[pyo3(signature = (samples, seed = 42))]
fn omega_infty_monte_carlo(py: Python<'_>, samples: u64, seed: u64) -> (f64, f64) {
    let e = py.detach(|| density::omega_infty_monte_carlo(samples, seed));
    (e.mean, e.std_error)
}

#[pyfunction]
fn omega_p(py: Python<'_>, p: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &density::omega_p(p).map_err(py_err)?)
}

#[pyfunction]
fn polytope_alpha(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &density::polytope_alpha())
}

#[pyfunction]
fn local_factor_identity(p: u64) -> PyResult<bool> {
    density::local_factor_identity(p).map_err(py_err)
}

#[pyfunction]
fn theta(py: Python<'_>, eta: [u64; 7]) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &arithfun::theta(eta).map_err(py_err)?)
}

#[pyfunction]
fn big_theta(py: Python<'_>, eta: [u64; 5]) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &arithfun::big_theta(eta).map_err(py_err)?)
}

#[pyfunction]
fn phi_star(py: Python<'_>, n: u64) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &arithfun::phi_star(n).map_err(py_err)?)
}

/// The leading constant and its ingredients; exact entries are `Fraction`s.
#[pyfunction]
#[pyo3(signature = (pmax = 100_000, tol = 1e-8))]
fn peyre_constant(py: Python<'_>, pmax: u64, tol: f64) -> PyResult<Bound<'_, PyDict>> {
    let b = py.detach(|| density::peyre_constant(pmax, tol)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("alpha_tilde", fraction(py, &b.alpha_tilde)?)?;
    d.set_item("beta", fraction(py, &b.beta)?)?;
    d.set_item("polytope_alpha", fraction(py, &b.polytope_alpha)?)?;
    d.set_item("omega_infty", (b.omega_infty.value, b.omega_infty.error))?;
    d.set_item("euler_product", b.euler_product.value)?;
    d.set_item("euler_tail_bound", b.euler_product.tail_bound)?;
    d.set_item("c", (b.c.value, b.c.error))?;
    d.set_item("c_from_count", b.c_from_count)?;
    d.set_item("assemblies_agree", b.assemblies_agree)?;
    Ok(d)
}

#[pyfunction]
fn check_lemma_inter(py: Python<'_>, eta: [u64; 7], bound: u64) -> PyResult<Bound<'_, PyAny>> {
    let r = py.detach(|| verify::check_lemma_inter(eta, bound)).map_err(py_err)?;
    to_py(py, &r)
}

#[pyfunction]
fn check_sum_eta7(
    py: Python<'_>,
    eta: [u64; 5],
    eta6: u64,
    bound: u64,
) -> PyResult<Bound<'_, PyAny>> {
    let r = py.detach(|| verify::check_sum_eta7(eta, eta6, bound)).map_err(py_err)?;
    to_py(py, &r)
}

#[pyfunction]
fn check_sum_eta6(py: Python<'_>, eta: [u64; 5], bound: u64) -> PyResult<Bound<'_, PyAny>> {
    let r = py.detach(|| verify::check_sum_eta6(eta, bound)).map_err(py_err)?;
    to_py(py, &r)
}

/// Rows of the height ladder plus the gate verdicts, as a dict.
#[pyfunction]
#[pyo3(signature = (ladder, direct_limit = 10_000))]
fn fit_asymptotic(py: Python<'_>, ladder: Vec<u64>, direct_limit: u64) -> PyResult<Bound<'_, PyAny>> {
    let opts = verify::FitOptions {
        direct_limit,
        ..Default::default()
    };
    let h = py.detach(|| verify::fit_asymptotic(&ladder, opts)).map_err(py_err)?;
    to_py(py, &h)
}

/// `suite` is one of `arith`, `inter`, `sum7`, `sum6`; `split` is
/// `calibration` or `validation`.
#[pyfunction]
#[pyo3(signature = (suite, split = "validation"))]
fn run_suite<'py>(py: Python<'py>, suite: &str, split: &str) -> PyResult<Bound<'py, PyAny>> {
    let suite = match suite {
        "arith" => verify::Suite::Arith,
        "inter" => verify::Suite::Inter,
        "sum7" => verify::Suite::Sum7,
        "sum6" => verify::Suite::Sum6,
        other => return Err(PyValueError::new_err(format!("unknown suite {other:?}"))),
    };
    let split = match split {
        "calibration" => verify::Split::Calibration,
        "validation" => verify::Split::Validation,
        other => return Err(PyValueError::new_err(format!("unknown split {other:?}"))),
    };
    let r = py.detach(|| verify::run_suite(suite, split)).map_err(py_err)?;
    to_py(py, &r)
}

#[pymodule]
#[pyo3(name = "quartic_a3")]
fn quartic_a3_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySurfacePoint>()?;
    m.add_class::<PyTorsorPoint>()?;
    m.add_function(wrap_pyfunction!(count_direct, m)?)?;
    m.add_function(wrap_pyfunction!(count_torsor, m)?)?;
    m.add_function(wrap_pyfunction!(torsor_points, m)?)?;
    m.add_function(wrap_pyfunction!(g1, m)?)?;
    m.add_function(wrap_pyfunction!(omega_infty, m)?)?;
    m.add_function(wrap_pyfunction!(omega_infty_monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(omega_p, m)?)?;
    m.add_function(wrap_pyfunction!(polytope_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(local_factor_identity, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(big_theta, m)?)?;
    m.add_function(wrap_pyfunction!(phi_star, m)?)?;
    m.add_function(wrap_pyfunction!(peyre_constant, m)?)?;
    m.add_function(wrap_pyfunction!(check_lemma_inter, m)?)?;
    m.add_function(wrap_pyfunction!(check_sum_eta7, m)?)?;
    m.add_function(wrap_pyfunction!(check_sum_eta6, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(fit_asymptotic, m)?)?;
    m.add("MAX_BOUND", surface::MAX_BOUND)?;
    Ok(())
}
