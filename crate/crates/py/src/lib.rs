//! Python bindings. Exact values cross the boundary as strings (`"64/3"`),
//! structured reports as objects with a `to_json()` escape hatch.

use pyo3::basic::CompareOp;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rect_spectra::exact::{self, parse_rational, rational_string};
use rect_spectra::optimize::{area, perimeter, OptimumReport};
use rect_spectra::real::Precision;
use rect_spectra::spectrum::{self, Mode, SpectrumEntry as CoreEntry};
use rect_spectra::{asymptotics, bounds, render, table, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::ResourceLimit(_) | Error::Mismatch(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn prec(digits: u32) -> PyResult<Precision> {
    if digits < 15 {
        return Err(PyValueError::new_err("digits must be >= 15"));
    }
    Ok(Precision::digits(digits))
}

fn modes(m: &[Mode]) -> Vec<(u64, u64)> {
    m.iter().map(|m| (m.p, m.q)).collect()
}

/// `n / sqrt(w)` with rational `n` and `w`.
#[pyclass(name = "RootQuotient", frozen, skip_from_py_object, module = "rect_spectra_py")]
#[derive(Clone)]
struct PyRootQuotient(exact::RootQuotient);

#[pymethods]
impl PyRootQuotient {
    #[new]
    #[pyo3(signature = (n, w = "1"))]
    fn new(n: &str, w: &str) -> PyResult<Self> {
        let n = parse_rational(n).map_err(py_err)?;
        let w = parse_rational(w).map_err(py_err)?;
        exact::RootQuotient::new(n, w).map(Self).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> String {
        rational_string(self.0.n())
    }

    #[getter]
    fn w(&self) -> String {
        rational_string(self.0.w())
    }

    /// The exact square `n^2 / w`.
    fn square(&self) -> String {
        rational_string(&self.0.square())
    }

    #[pyo3(signature = (digits = 30))]
    fn to_decimal(&self, digits: u32) -> String {
        self.0.to_decimal(digits)
    }

    /// Radical form such as `18*sqrt(5)/5`.
    fn radical(&self) -> String {
        render::value_string(&self.0)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __richcmp__(&self, other: PyRef<'_, Self>, op: CompareOp) -> bool {
        op.matches(self.0.compare(&other.0))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RootQuotient('{}', '{}')", self.n(), self.w())
    }
}

#[pyclass(name = "SpectrumEntry", frozen, module = "rect_spectra_py")]
struct PySpectrumEntry(CoreEntry);

#[pymethods]
impl PySpectrumEntry {
    #[getter]
    fn value(&self) -> PyRootQuotient {
        PyRootQuotient(self.0.value.clone())
    }

    #[getter]
    fn modes(&self) -> Vec<(u64, u64)> {
        modes(&self.0.modes)
    }

    #[getter]
    fn multiplicity(&self) -> usize {
        self.0.multiplicity
    }

    #[getter]
    fn first_index(&self) -> usize {
        self.0.first_index
    }

    fn __repr__(&self) -> String {
        format!("SpectrumEntry(value={}, modes={:?})", self.0.value, self.modes())
    }
}

/// Area-1 rectangle with sides `1/b` and `b`, `w = b^4 >= 1`.
#[pyclass(name = "AreaRectangle", frozen, module = "rect_spectra_py")]
struct PyAreaRectangle(spectrum::AreaRectangle);

#[pymethods]
impl PyAreaRectangle {
    /// Any positive `w`; `w < 1` is replaced by `1/w` (the same rectangle turned).
    #[new]
    fn new(w: &str) -> PyResult<Self> {
        let w = parse_rational(w).map_err(py_err)?;
        spectrum::AreaRectangle::canonical(w).map(Self).map_err(py_err)
    }

    #[getter]
    fn w(&self) -> String {
        rational_string(self.0.w())
    }

    /// The side `b = w^(1/4)` in radical form.
    fn b(&self) -> String {
        render::b_string(self.0.w())
    }

    /// `mu_k`, 0-indexed with `mu_0 = 0`.
    fn kth_eigenvalue(&self, k: usize) -> PyResult<PySpectrumEntry> {
        spectrum::kth_eigenvalue(k, &self.0).map(PySpectrumEntry).map_err(py_err)
    }

    /// `lambda_k`, 1-indexed.
    fn kth_dirichlet(&self, k: usize) -> PyResult<PySpectrumEntry> {
        spectrum::kth_dirichlet(k, &self.0).map(PySpectrumEntry).map_err(py_err)
    }

    fn neumann_eigenvalue(&self, p: u64, q: u64) -> PyRootQuotient {
        PyRootQuotient(spectrum::neumann_eigenvalue(Mode::new(p, q), &self.0))
    }

    /// Positive Neumann eigenvalues `<= mu`, with multiplicity.
    fn count_n(&self, mu: &PyRootQuotient) -> String {
        spectrum::count_n(&mu.0, &self.0).to_string()
    }

    /// Lattice points of the full ellipse with eigenvalue `<= mu`.
    fn count_n0(&self, mu: &PyRootQuotient) -> String {
        spectrum::count_n0(&mu.0, &self.0).to_string()
    }
}

#[pyclass(name = "OptimumReport", frozen, module = "rect_spectra_py")]
struct PyOptimumReport(OptimumReport);

#[pymethods]
impl PyOptimumReport {
    #[getter]
    fn k(&self) -> u64 {
        self.0.k
    }

    #[getter]
    fn value(&self) -> PyRootQuotient {
        PyRootQuotient(self.0.value.clone())
    }

    /// Optimal `w` values, ascending.
    #[getter]
    fn ws(&self) -> Vec<String> {
        self.0.optimizers.iter().map(|o| rational_string(&o.w)).collect()
    }

    /// Modes on the optimal curve, one list per optimizer.
    #[getter]
    fn modes(&self) -> Vec<Vec<(u64, u64)>> {
        self.0.optimizers.iter().map(|o| modes(&o.modes)).collect()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

#[pyclass(name = "PerimeterOptimum", frozen, module = "rect_spectra_py")]
struct PyPerimeterOptimum(perimeter::PerimeterOptimum);

#[pymethods]
impl PyPerimeterOptimum {
    #[getter]
    fn attained(&self) -> bool {
        self.0.attained
    }

    /// Optimal (or limiting) value in units of pi^2, as a decimal string.
    #[getter]
    fn value(&self) -> String {
        self.0.value.clone()
    }

    #[getter]
    fn a(&self) -> Vec<String> {
        self.0.optimizers.iter().map(|o| o.a.clone()).collect()
    }

    #[getter]
    fn a_exact(&self) -> Vec<String> {
        self.0.optimizers.iter().map(|o| o.a_exact.clone()).collect()
    }

    #[getter]
    fn breakpoints(&self) -> Vec<String> {
        self.0.breakpoints.clone()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

#[pyfunction]
fn maximize_mu_k(k: u64) -> PyResult<PyOptimumReport> {
    area::maximize_mu_k(k).map(PyOptimumReport).map_err(py_err)
}

#[pyfunction]
fn minimize_dirichlet_lambda_k(k: u64) -> PyResult<PyOptimumReport> {
    area::minimize_dirichlet_lambda_k(k).map(PyOptimumReport).map_err(py_err)
}

#[pyfunction]
fn conjecture_indices(n_max: u32) -> PyResult<Vec<(u32, u128)>> {
    area::conjecture_indices(n_max).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (k, digits = 30))]
fn perimeter_max(k: u64, digits: u32) -> PyResult<PyPerimeterOptimum> {
    perimeter::perimeter_max(k, prec(digits)?).map(PyPerimeterOptimum).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (k, digits = 30))]
fn perimeter_min(k: u64, digits: u32) -> PyResult<PyPerimeterOptimum> {
    perimeter::perimeter_min(k, prec(digits)?).map(PyPerimeterOptimum).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (k, digits = 30))]
fn perimeter_breakpoints(k: u64, digits: u32) -> PyResult<Vec<String>> {
    let p = prec(digits)?;
    let bps = perimeter::perimeter_breakpoints(k, p).map_err(py_err)?;
    Ok(bps.iter().map(|b| b.to_decimal(p.get())).collect())
}

/// Runs one named inequality check; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (name, k_max = 100, samples = 1000, seed = 0))]
fn check_bound(name: &str, k_max: u64, samples: usize, seed: u64) -> PyResult<String> {
    let name: bounds::BoundName = name.parse().map_err(py_err)?;
    let grid = bounds::SweepGrid::sampled(k_max, samples, seed);
    let guard = bounds::default_guard(Precision::default());
    bounds::sweep_check(name, &grid, &guard).map(|r| r.to_json()).map_err(py_err)
}

/// Sweep rows for `k = 1..=k_max` as JSON.
#[pyfunction]
fn asymptotics_sweep(k_max: u64) -> PyResult<String> {
    let cfg = asymptotics::AsymptoticsConfig { k_max, ..Default::default() };
    let rows = asymptotics::run_sweep(&cfg).map_err(py_err)?;
    serde_json::to_string(&rows).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Recomputes the k = 1..15 table; returns `(matches, json)`.
#[pyfunction]
fn reproduce_table() -> PyResult<(bool, String)> {
    let rep = table::reproduce_table(&Default::default()).map_err(py_err)?;
    Ok((rep.matches(), rep.to_json()))
}

#[pymodule]
fn rect_spectra_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootQuotient>()?;
    m.add_class::<PySpectrumEntry>()?;
    m.add_class::<PyAreaRectangle>()?;
    m.add_class::<PyOptimumReport>()?;
    m.add_class::<PyPerimeterOptimum>()?;
    m.add_function(wrap_pyfunction!(maximize_mu_k, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_dirichlet_lambda_k, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_indices, m)?)?;
    m.add_function(wrap_pyfunction!(perimeter_max, m)?)?;
    m.add_function(wrap_pyfunction!(perimeter_min, m)?)?;
    m.add_function(wrap_pyfunction!(perimeter_breakpoints, m)?)?;
    m.add_function(wrap_pyfunction!(check_bound, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotics_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_table, m)?)?;
    Ok(())
}
