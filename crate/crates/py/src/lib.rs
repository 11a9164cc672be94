//! Python bindings for `mubpp-core`.

use std::sync::Arc;

use mubpp_core::bounds::{build_report_for, BasisSubset};
use mubpp_core::{
    build_v_matrix, exact_max_nondetection as exact_max, verify_mub, Complex64, Error, FieldElement, FieldSpec,
    SessionConfig,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } | Error::Ambiguous { .. } | Error::Structure(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, json: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (json,))
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn parse_subset(bases: &str) -> PyResult<BasisSubset> {
    bases.parse().map_err(py_err)
}

/// Complete set of mutually unbiased bases in dimension `n`.
#[pyclass(name = "MubSet", frozen)]
struct PyMubSet {
    inner: mubpp_core::MubSet,
}

#[pymethods]
impl PyMubSet {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(Self { inner: mubpp_core::MubSet::for_dimension(n).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: mubpp_core::MubSet::from_json(text).map_err(py_err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(py_err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Vector `k` of basis `m` as a list of complex amplitudes.
    fn vector(&self, m: usize, k: usize) -> PyResult<Vec<Complex64>> {
        let basis = self.inner.basis(m).map_err(py_err)?;
        if k >= self.inner.dim() {
            return Err(py_err(Error::IndexOutOfRange { index: k, limit: self.inner.dim() }));
        }
        Ok(basis.vector(k).as_slice().to_vec())
    }

    /// Overlap check; returns a dict with `max_deviation` and `passed`.
    #[pyo3(signature = (tol = 1e-10))]
    fn verify<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &to_json(&verify_mub(&self.inner, tol))?)
    }

    /// Exact maxima and analytic bounds over every input state.
    #[pyo3(signature = (bases = "all"))]
    fn bounds_report<'py>(&self, py: Python<'py>, bases: &str) -> PyResult<Bound<'py, PyAny>> {
        let report = build_report_for(&self.inner, &parse_subset(bases)?).map_err(py_err)?;
        json_to_py(py, &to_json(&report)?)
    }

    /// `(d, amplitudes)` for Eve's best attack on input `alpha`.
    #[pyo3(signature = (alpha, bases = "all"))]
    fn exact_max_nondetection(&self, alpha: usize, bases: &str) -> PyResult<(f64, Vec<Complex64>)> {
        let subset = parse_subset(bases)?.indices(&self.inner).map_err(py_err)?;
        let v = build_v_matrix(alpha, &self.inner, &subset).map_err(py_err)?;
        let (d, a) = exact_max(&v).map_err(py_err)?;
        Ok((d, a.amps.as_slice().to_vec()))
    }

    fn __repr__(&self) -> String {
        format!("MubSet(dim={}, bases={})", self.inner.dim(), self.inner.len())
    }
}

/// Arithmetic in GF(n) on element indices.
#[pyclass(name = "GaloisField", frozen)]
struct PyField {
    spec: Arc<FieldSpec>,
}

impl PyField {
    fn el(&self, index: usize) -> PyResult<FieldElement> {
        FieldElement::from_index(&self.spec, index).map_err(py_err)
    }
}

#[pymethods]
impl PyField {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(Self { spec: FieldSpec::for_order(n).map_err(py_err)? })
    }

    #[getter]
    fn order(&self) -> usize {
        self.spec.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.spec.p()
    }

    fn add(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.el(a)?.add(&self.el(b)?).map_err(py_err)?.index())
    }

    fn sub(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.el(a)?.sub(&self.el(b)?).map_err(py_err)?.index())
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.el(a)?.mul(&self.el(b)?).map_err(py_err)?.index())
    }

    fn div(&self, a: usize, b: usize) -> PyResult<usize> {
        Ok(self.el(a)?.div(&self.el(b)?).map_err(py_err)?.index())
    }

    fn inv(&self, a: usize) -> PyResult<usize> {
        Ok(self.el(a)?.inv().map_err(py_err)?.index())
    }

    fn trace(&self, a: usize) -> PyResult<u32> {
        Ok(self.el(a)?.trace())
    }

    fn __repr__(&self) -> String {
        format!("GaloisField({})", self.spec.order())
    }
}

/// Runs a session from its JSON configuration and returns the statistics.
#[pyfunction]
fn run_session<'py>(py: Python<'py>, config_json: &str) -> PyResult<Bound<'py, PyAny>> {
    let config = SessionConfig::from_json(config_json).map_err(py_err)?;
    let stats = mubpp_core::run_session(&config).map_err(py_err)?;
    json_to_py(py, &to_json(&stats)?)
}

/// Bound table rows, one dict per dimension.
#[pyfunction]
#[pyo3(signature = (n_list, bases = "all"))]
fn bounds_table<'py>(py: Python<'py>, n_list: Vec<usize>, bases: &str) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let subset = parse_subset(bases)?;
    n_list
        .into_iter()
        .map(|n| {
            let report = mubpp_core::build_report(n, &subset).map_err(py_err)?;
            json_to_py(py, &to_json(&report)?)
        })
        .collect()
}

#[pymodule]
fn mubpp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMubSet>()?;
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(run_session, m)?)?;
    m.add_function(wrap_pyfunction!(bounds_table, m)?)?;
    Ok(())
}
