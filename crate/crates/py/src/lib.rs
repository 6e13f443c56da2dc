//! Python bindings. Matrices cross the boundary as lists of rows; reports are
//! returned as plain dicts decoded from their JSON form.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cxint::counts;
use cxint::experiments::{self, ExperimentConfig, Mode};
use cxint::intersection::{IntersectionOptions, Method};
use cxint::io::{format_signature_spec, pair_to_json, parse_pair, parse_signature_spec};
use cxint::structures::{self, AngleBlock, Sign, DEFAULT_CLUSTER_TOL};
use cxint::Mat;

create_exception!(cxint_py, CxintError, PyValueError);

fn err(e: cxint::Error) -> PyErr {
    CxintError::new_err(e.to_string())
}

fn sign(orientation: i32) -> PyResult<Sign> {
    match orientation {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        o => Err(PyValueError::new_err(format!("orientation must be 1 or -1, got {o}"))),
    }
}

fn to_dict<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyDict>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))?.cast_into::<PyDict>().map_err(PyErr::from)
}

/// A pair of complex structures on `R^{2n}`.
#[pyclass(name = "StructurePair", module = "cxint_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyStructurePair {
    inner: cxint::StructurePair,
}

#[pymethods]
impl PyStructurePair {
    #[new]
    fn new(j0: Vec<Vec<f64>>, j1: Vec<Vec<f64>>) -> PyResult<Self> {
        let j0 = Mat::from_rows(&j0).map_err(err)?;
        let j1 = Mat::from_rows(&j1).map_err(err)?;
        let inner = cxint::StructurePair::from_matrices(j0, j1).map_err(err)?;
        Ok(PyStructurePair { inner })
    }

    /// Random pair; `kind` is one of the experiment modes.
    #[staticmethod]
    #[pyo3(signature = (kind, n, seed, cond_bound = 50.0))]
    fn random(kind: &str, n: usize, seed: u64, cond_bound: f64) -> PyResult<Self> {
        let mode: Mode = kind.parse().map_err(err)?;
        if n == 0 || !(cond_bound > 1.0) {
            return Err(PyValueError::new_err("need n >= 1 and cond_bound > 1"));
        }
        let mut rng = structures::trial_rng(seed, 0);
        let inner = experiments::sample_pair(mode, n, cond_bound, &mut rng).map_err(err)?;
        Ok(PyStructurePair { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyStructurePair { inner: parse_pair(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        pair_to_json(&self.inner)
    }

    #[getter]
    fn j0(&self) -> Vec<Vec<f64>> {
        self.inner.j0.matrix().to_rows()
    }

    #[getter]
    fn j1(&self) -> Vec<Vec<f64>> {
        self.inner.j1.matrix().to_rows()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn is_orthogonal(&self) -> bool {
        self.inner.is_orthogonal
    }

    #[getter]
    fn same_orientation(&self) -> bool {
        self.inner.same_orientation
    }

    fn k_operator(&self) -> Vec<Vec<f64>> {
        self.inner.k_operator().to_rows()
    }

    fn conjugate(&self, g: Vec<Vec<f64>>) -> PyResult<Self> {
        let g = Mat::from_rows(&g).map_err(err)?;
        Ok(PyStructurePair { inner: self.inner.conjugate(&g).map_err(err)? })
    }

    fn negate(&self) -> Self {
        PyStructurePair { inner: self.inner.negate() }
    }

    fn __repr__(&self) -> String {
        format!(
            "StructurePair(n={}, orthogonal={}, same_orientation={})",
            self.inner.n(),
            self.inner.is_orthogonal,
            self.inner.same_orientation
        )
    }
}

/// Isomorphism invariant of an orthogonal pair.
#[pyclass(name = "Signature", module = "cxint_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySignature {
    inner: structures::PairSignature,
}

#[pymethods]
impl PySignature {
    #[new]
    #[pyo3(signature = (blocks, l, s))]
    fn new(blocks: Vec<(f64, usize)>, l: usize, s: usize) -> PyResult<Self> {
        let blocks = blocks.into_iter().map(|(theta, mult)| AngleBlock { theta, mult }).collect();
        Ok(PySignature { inner: structures::PairSignature::new(blocks, l, s).map_err(err)? })
    }

    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        Ok(PySignature { inner: parse_signature_spec(spec).map_err(err)? })
    }

    #[getter]
    fn blocks(&self) -> Vec<(f64, usize)> {
        self.inner.blocks.iter().map(|b| (b.theta, b.mult)).collect()
    }

    #[getter]
    fn l(&self) -> usize {
        self.inner.l
    }

    #[getter]
    fn s(&self) -> usize {
        self.inner.s
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn same_orientation(&self) -> bool {
        self.inner.same_orientation()
    }

    fn spec(&self) -> String {
        format_signature_spec(&self.inner)
    }

    fn canonical_pair(&self) -> PyResult<PyStructurePair> {
        Ok(PyStructurePair { inner: structures::construct_canonical_pair(&self.inner).map_err(err)? })
    }

    #[pyo3(signature = (other, tol = 1e-9))]
    fn approx_eq(&self, other: &PySignature, tol: f64) -> bool {
        self.inner.approx_eq(&other.inner, tol)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Signature.parse({:?})", self.spec())
    }
}

#[pyfunction]
fn sigma(k: i64, n: i64) -> PyResult<i64> {
    if n > counts::MAX_N as i64 {
        return Err(PyValueError::new_err(format!("n is limited to {}", counts::MAX_N)));
    }
    Ok(counts::sigma(k, n))
}

#[pyfunction]
fn sigma_table(kmax: usize, nmax: usize) -> PyResult<Vec<Vec<Option<i64>>>> {
    if kmax > nmax || nmax > counts::MAX_N {
        return Err(PyValueError::new_err("need kmax <= nmax <= 120"));
    }
    Ok(counts::sigma_table(kmax, nmax).rows)
}

/// `(same, opposite)` homological counts for a pair of the given orientation class.
#[pyfunction]
fn expected_counts(same_orientation: bool, n: i64, k: i64) -> (i64, i64) {
    let c = counts::expected_counts(same_orientation, n, k);
    (c.same, c.opposite)
}

#[pyfunction]
fn expected_signed_counts(same_orientation: bool, n: i64, k: i64) -> (i64, i64) {
    let c = counts::expected_signed_counts(same_orientation, n, k);
    (c.same, c.opposite)
}

#[pyfunction]
fn standard_j(n: usize) -> Vec<Vec<f64>> {
    structures::standard_j(n).matrix().to_rows()
}

#[pyfunction]
#[pyo3(signature = (n, orientation, seed))]
fn random_orthogonal_j(n: usize, orientation: i32, seed: u64) -> PyResult<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    Ok(structures::random_orthogonal_j(n, sign(orientation)?, seed).matrix().to_rows())
}

#[pyfunction]
fn orientation(j: Vec<Vec<f64>>) -> PyResult<i64> {
    let j = structures::ComplexStructure::new(Mat::from_rows(&j).map_err(err)?).map_err(err)?;
    Ok(j.orientation().value())
}

#[pyfunction]
#[pyo3(signature = (pair, cluster_tol = DEFAULT_CLUSTER_TOL))]
fn classify(pair: &PyStructurePair, cluster_tol: f64) -> PyResult<PySignature> {
    let inner = structures::classify_orthogonal_pair(&pair.inner, cluster_tol).map_err(err)?;
    Ok(PySignature { inner })
}

/// Common invariant `2k`-planes as a report dict.
#[pyfunction]
#[pyo3(signature = (pair, k, method = "auto"))]
fn common_invariant_planes<'py>(
    py: Python<'py>,
    pair: &PyStructurePair,
    k: usize,
    method: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let method = match method {
        "auto" => Method::Auto,
        "signature" => Method::Signature,
        "spectral" => Method::Spectral,
        m => return Err(PyValueError::new_err(format!("unknown method {m:?}"))),
    };
    let opts = IntersectionOptions { method, ..IntersectionOptions::default() };
    let report = cxint::common_invariant_planes(&pair.inner, k, &opts).map_err(err)?;
    to_dict(py, &report)
}

#[pyfunction]
#[pyo3(signature = (mode, n, k, trials, seed, cond_bound = 50.0))]
fn run_trials<'py>(
    py: Python<'py>,
    mode: &str,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    cond_bound: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let mut config = ExperimentConfig::new(mode.parse().map_err(err)?, n, k, trials, seed);
    config.cond_bound = cond_bound;
    let report = py.detach(|| experiments::run_trials(&config)).map_err(err)?;
    to_dict(py, &report)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol = 1e-9))]
fn example_r4<'py>(py: Python<'py>, a: f64, b: f64, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    to_dict(py, &experiments::example_r4(a, b, tol).map_err(err)?)
}

#[pyfunction]
fn example_r4_boundary<'py>(py: Python<'py>, b: f64) -> PyResult<Bound<'py, PyDict>> {
    to_dict(py, &experiments::example_r4_boundary(b).map_err(err)?)
}

#[pymodule]
fn cxint_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CxintError", m.py().get_type::<CxintError>())?;
    m.add_class::<PyStructurePair>()?;
    m.add_class::<PySignature>()?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_table, m)?)?;
    m.add_function(wrap_pyfunction!(expected_counts, m)?)?;
    m.add_function(wrap_pyfunction!(expected_signed_counts, m)?)?;
    m.add_function(wrap_pyfunction!(standard_j, m)?)?;
    m.add_function(wrap_pyfunction!(random_orthogonal_j, m)?)?;
    m.add_function(wrap_pyfunction!(orientation, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(common_invariant_planes, m)?)?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_function(wrap_pyfunction!(example_r4, m)?)?;
    m.add_function(wrap_pyfunction!(example_r4_boundary, m)?)?;
    Ok(())
}
