//! Python bindings: points of CP², distances and angle triples, the law
//! checks, and construction and verification of the four bases.
//!
//! Vectors cross the boundary as sequences of three Python `complex`; bases
//! as `(label, [v0, v1, v2])` tuples.

use cp2mub::trig::{self, LawReport};
use cp2mub::{verification, Basis, CVec3, GaugeConfig, ProjPoint, TangentVector};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Vector = [Complex64; 3];
type BasisTuple = (String, [Vector; 3]);

fn value_error(e: cp2mub::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_basis((label, vectors): BasisTuple) -> Basis {
    Basis::new(label, vectors.map(CVec3))
}

fn from_basis(b: &Basis) -> BasisTuple {
    (b.label.clone(), b.vectors.map(|v| v.0))
}

/// A point of CP², stored as its canonical unit representative.
#[pyclass(name = "ProjPoint", module = "pycp2mub", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyProjPoint(ProjPoint);

#[pymethods]
impl PyProjPoint {
    #[new]
    fn new(coords: Vector) -> PyResult<Self> {
        ProjPoint::new(CVec3(coords)).map(PyProjPoint).map_err(value_error)
    }

    #[getter]
    fn coords(&self) -> Vector {
        self.0.rep().0
    }

    fn distance(&self, other: &PyProjPoint) -> f64 {
        cp2mub::fs_distance(&self.0, &other.0)
    }

    fn approx_eq(&self, other: &PyProjPoint, tol: f64) -> bool {
        self.0.approx_eq(&other.0, tol)
    }

    fn __repr__(&self) -> String {
        format!("ProjPoint({})", self.0.rep())
    }
}

#[pyclass(name = "VerificationReport", module = "pycp2mub", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct PyVerificationReport {
    tolerance: f64,
    /// `(label, deviation)` per basis.
    orthonormality: Vec<(String, f64)>,
    /// `(first, second, deviation)` per pair.
    unbiasedness: Vec<(String, String, f64)>,
    passed: bool,
    max_deviation: f64,
}

impl From<cp2mub::VerificationReport> for PyVerificationReport {
    fn from(r: cp2mub::VerificationReport) -> Self {
        PyVerificationReport {
            tolerance: r.tolerance,
            max_deviation: r.max_deviation(),
            passed: r.pass,
            orthonormality: r.orthonormality.into_iter().map(|b| (b.label, b.deviation)).collect(),
            unbiasedness: r.unbiasedness.into_iter().map(|p| (p.first, p.second, p.deviation)).collect(),
        }
    }
}

#[pymethods]
impl PyVerificationReport {
    fn __bool__(&self) -> bool {
        self.passed
    }

    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(passed={}, max_deviation={:e}, tolerance={:e})",
            self.passed, self.max_deviation, self.tolerance
        )
    }
}

#[pyclass(name = "LawReport", module = "pycp2mub", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct PyLawReport {
    law: String,
    trials: usize,
    max_residual: f64,
    mean_residual: f64,
    failures: usize,
    tolerance: f64,
}

impl From<LawReport> for PyLawReport {
    fn from(r: LawReport) -> Self {
        PyLawReport {
            law: r.law,
            trials: r.trials,
            max_residual: r.max_residual,
            mean_residual: r.mean_residual,
            failures: r.failures,
            tolerance: r.tolerance,
        }
    }
}

#[pymethods]
impl PyLawReport {
    #[getter]
    fn passed(&self) -> bool {
        self.failures == 0
    }

    fn __repr__(&self) -> String {
        format!(
            "LawReport(law={:?}, trials={}, max_residual={:e}, failures={})",
            self.law, self.trials, self.max_residual, self.failures
        )
    }
}

#[pyfunction]
fn fs_distance(p: &PyProjPoint, q: &PyProjPoint) -> f64 {
    cp2mub::fs_distance(&p.0, &q.0)
}

/// `(alpha, theta, psi)` between two tangent directions at `base`.
#[pyfunction]
fn angles_between(base: &PyProjPoint, v: Vector, w: Vector) -> PyResult<(f64, f64, f64)> {
    let v = TangentVector::new(base.0, CVec3(v)).map_err(value_error)?;
    let w = TangentVector::new(base.0, CVec3(w)).map_err(value_error)?;
    let a = cp2mub::angles_between(&v, &w).map_err(value_error)?;
    Ok((a.alpha, a.theta, a.psi))
}

#[pyfunction]
fn shirokov_predict_c(a: f64, b: f64, alpha: f64, theta: f64) -> PyResult<f64> {
    trig::shirokov_predict_c(a, b, alpha, theta).map_err(value_error)
}

#[pyfunction]
fn tetra_identity_residual() -> f64 {
    trig::tetra_identity_residual()
}

/// Returns `(e21, e22)` reports.
#[pyfunction]
#[pyo3(signature = (trials, seed, tol = 1e-9))]
fn run_law_suite(py: Python<'_>, trials: usize, seed: u64, tol: f64) -> (PyLawReport, PyLawReport) {
    let r = py.detach(|| trig::run_law_suite(trials, seed, tol));
    (r.e21.into(), r.e22.into())
}

/// The four bases for the standard gauge, rotated by `azimuth`.
#[pyfunction]
#[pyo3(signature = (azimuth = 0.0))]
fn build_system(azimuth: f64) -> PyResult<Vec<BasisTuple>> {
    let gauge = GaugeConfig { azimuth, ..GaugeConfig::default() };
    let sys = cp2mub::build_system(&gauge).map_err(value_error)?;
    Ok(sys.bases.iter().map(from_basis).collect())
}

#[pyfunction]
#[pyo3(signature = (bases, tol = cp2mub::EXACT_TOL))]
fn verify(bases: Vec<BasisTuple>, tol: f64) -> PyResult<PyVerificationReport> {
    let bases: Vec<Basis> = bases.into_iter().map(to_basis).collect();
    cp2mub::check_system(&bases, tol).map(Into::into).map_err(value_error)
}

/// `|<e_i, f_j>|` for two bases.
#[pyfunction]
fn moduli(b1: BasisTuple, b2: BasisTuple) -> [[f64; 3]; 3] {
    let (b1, b2) = (to_basis(b1), to_basis(b2));
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| cp2mub::inner(&b1.vectors[i], &b2.vectors[j]).norm()))
}

/// Fubini–Study distances between the points of two bases.
#[pyfunction]
fn cross_distances(b1: BasisTuple, b2: BasisTuple) -> PyResult<[[f64; 3]; 3]> {
    verification::cross_distance_matrix(&to_basis(b1), &to_basis(b2)).map_err(value_error)
}

#[pymodule]
fn pycp2mub(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProjPoint>()?;
    m.add_class::<PyVerificationReport>()?;
    m.add_class::<PyLawReport>()?;
    m.add_function(wrap_pyfunction!(fs_distance, m)?)?;
    m.add_function(wrap_pyfunction!(angles_between, m)?)?;
    m.add_function(wrap_pyfunction!(shirokov_predict_c, m)?)?;
    m.add_function(wrap_pyfunction!(tetra_identity_residual, m)?)?;
    m.add_function(wrap_pyfunction!(run_law_suite, m)?)?;
    m.add_function(wrap_pyfunction!(build_system, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(moduli, m)?)?;
    m.add_function(wrap_pyfunction!(cross_distances, m)?)?;
    m.add("TETRA_SIDE", cp2mub::TETRA_SIDE)?;
    m.add("UNBIASED_MODULUS", cp2mub::UNBIASED_MODULUS)?;
    m.add("EXACT_TOL", cp2mub::EXACT_TOL)?;
    m.add("GEOM_TOL", cp2mub::GEOM_TOL)?;
    Ok(())
}
