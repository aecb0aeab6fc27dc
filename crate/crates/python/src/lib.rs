//! Python bindings for `magicdistill`.
//!
//! Reports and search summaries cross the boundary as plain dicts built from
//! the same JSON the command-line tool prints.

use magicdistill::enumerator::{self, x_group_enumerator, IntPolynomial};
use magicdistill::search::{run_search, Emit, SearchConfig, SearchMode};
use magicdistill::{pauli, StabilizerCode};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyList;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "PauliOperator", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PyPauli(pauli::PauliOperator);

#[pymethods]
impl PyPauli {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(value_error)
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    #[getter]
    fn weight(&self) -> u32 {
        self.0.weight()
    }

    /// Phase exponent k of i^k.
    #[getter]
    fn phase(&self) -> u8 {
        self.0.phase_exp()
    }

    fn commutes_with(&self, other: &PyPauli) -> bool {
        self.0.commutes_with(&other.0)
    }

    fn m3_conjugate(&self) -> Self {
        Self(self.0.m3_conjugate())
    }

    fn __mul__(&self, other: &PyPauli) -> PyResult<Self> {
        self.0.multiply(&other.0).map(Self).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliOperator('{}')", self.0)
    }
}

#[pyclass(name = "StabilizerCode", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCode(StabilizerCode);

#[pymethods]
impl PyCode {
    /// Builds a validated code from generator strings such as `"XZZXI"`.
    #[new]
    fn new(generators: Vec<String>) -> PyResult<Self> {
        let code = StabilizerCode::from_strs(&generators).map_err(value_error)?;
        code.validate().map_err(value_error)?;
        Ok(Self(code))
    }

    /// Parses the code-file format: one generator per line, `#` comments.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let code = StabilizerCode::parse_code_file(text).map_err(value_error)?;
        code.validate().map_err(value_error)?;
        Ok(Self(code))
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    #[getter]
    fn generators(&self) -> Vec<PyPauli> {
        self.0.generators().iter().copied().map(PyPauli).collect()
    }

    fn flip_sign(&self, index: usize) -> PyResult<Self> {
        if index >= self.0.generators().len() {
            return Err(value_error(format!("no generator {index}")));
        }
        Ok(Self(self.0.flip_sign(index)))
    }

    fn is_m3_code(&self) -> bool {
        self.0.is_m3_code()
    }

    /// Full distillation report as a dict.
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let report = enumerator::analyze(&self.0).map_err(value_error)?;
        json_to_py(py, &report.to_json())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        let gens: Vec<String> = self.0.generators().iter().map(|g| format!("'{g}'")).collect();
        format!("StabilizerCode([{}])", gens.join(", "))
    }
}

/// Threshold data of a distillation polynomial given by ascending coefficients.
#[pyfunction]
fn threshold<'py>(py: Python<'py>, w_dist: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &enumerator::threshold(&IntPolynomial::new(w_dist)))
}

/// `W_I` coefficients of the all-X group spanned by the given bit vectors.
#[pyfunction]
fn x_code_enumerator(n: usize, vectors: Vec<u64>) -> PyResult<Vec<i64>> {
    let w = x_group_enumerator(n, &vectors).map_err(value_error)?;
    Ok(w.coefficients().to_vec())
}

/// Runs a search and returns `(summary, records)`.
#[pyfunction]
#[pyo3(signature = (n, m3 = false, emit = "useful", jobs = 0, min_weight = 2))]
fn search<'py>(
    py: Python<'py>,
    n: usize,
    m3: bool,
    emit: &str,
    jobs: usize,
    min_weight: u32,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyList>)> {
    let mut config = SearchConfig::new(n, if m3 { SearchMode::M3 } else { SearchMode::General });
    config.emit = match emit {
        "useful" => Emit::Useful,
        "axis-preserving" | "axis_preserving" => Emit::AxisPreserving,
        "all" => Emit::All,
        other => return Err(value_error(format!("unknown emit mode {other:?}"))),
    };
    config.jobs = jobs;
    config.min_weight = min_weight;
    config.validate().map_err(value_error)?;
    let outcome = py
        .detach(|| run_search(&config))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let records = PyList::empty(py);
    for r in &outcome.records {
        records.append(json_to_py(py, r)?)?;
    }
    Ok((json_to_py(py, &outcome.summary)?, records))
}

#[pymodule]
fn magicdistill_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauli>()?;
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(x_code_enumerator, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    Ok(())
}
