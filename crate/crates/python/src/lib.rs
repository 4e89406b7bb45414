//! Python bindings for `hyperlab`.

use std::collections::BTreeMap;

use hyperlab::analytics::equidist::{self, Case};
use hyperlab::analytics::{euler, report};
use hyperlab::{elliptic, gaussian, quadratic, quaternion, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(hyperlab_py, CapExceeded, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain(m) => PyValueError::new_err(m),
        e @ Error::CapExceeded { .. } => CapExceeded::new_err(e.to_string()),
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        e => PyRuntimeError::new_err(e.to_string()),
    }
}

type Complex = (f64, f64);

fn pair(z: num_complex::Complex64) -> Complex {
    (z.re, z.im)
}

#[pyclass(name = "GaussInt", frozen, from_py_object, eq, hash)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyGaussInt(gaussian::GaussInt);

#[pymethods]
impl PyGaussInt {
    #[new]
    fn new(re: i64, im: i64) -> Self {
        PyGaussInt(gaussian::GaussInt::new(re, im))
    }

    #[getter]
    fn re(&self) -> i64 {
        self.0.re
    }

    #[getter]
    fn im(&self) -> i64 {
        self.0.im
    }

    fn norm(&self) -> u128 {
        self.0.norm()
    }

    fn conj(&self) -> Self {
        PyGaussInt(self.0.conj())
    }

    fn arg(&self) -> f64 {
        self.0.arg()
    }

    fn is_primary(&self) -> bool {
        self.0.is_primary()
    }

    fn __mul__(&self, o: &Self) -> PyResult<Self> {
        self.0
            .checked_mul(o.0)
            .map(PyGaussInt)
            .ok_or_else(|| PyValueError::new_err("product overflows 64 bits"))
    }

    fn __repr__(&self) -> String {
        format!("GaussInt({}, {})", self.0.re, self.0.im)
    }
}

#[pyclass(name = "UniModularMat", frozen, from_py_object, eq, hash)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyUniModularMat(elliptic::UniModularMat);

#[pymethods]
impl PyUniModularMat {
    #[new]
    fn new(a: i64, b: i64, c: i64, d: i64) -> PyResult<Self> {
        elliptic::UniModularMat::new(a, b, c, d).map(PyUniModularMat).map_err(to_py)
    }

    #[staticmethod]
    fn from_gauss_pair(z1: PyGaussInt, z2: PyGaussInt) -> PyResult<Self> {
        elliptic::from_gauss_pair(z1.0, z2.0).map(PyUniModularMat).map_err(to_py)
    }

    fn entries(&self) -> (i64, i64, i64, i64) {
        let m = self.0;
        (m.a, m.b, m.c, m.d)
    }

    fn nu_h(&self) -> u64 {
        self.0.nu_h()
    }

    fn to_gauss_pair(&self) -> (PyGaussInt, PyGaussInt) {
        let (z1, z2) = self.0.to_gauss_pair();
        (PyGaussInt(z1), PyGaussInt(z2))
    }

    /// `(theta1, theta2, r)`.
    fn cartan_angles(&self) -> PyResult<(f64, f64, f64)> {
        let a = elliptic::cartan_angles(&self.0).map_err(to_py)?;
        Ok((a.theta1, a.theta2, a.r))
    }

    fn inverse(&self) -> Self {
        PyUniModularMat(self.0.inverse())
    }

    fn __matmul__(&self, o: &Self) -> Self {
        PyUniModularMat(self.0.mul(&o.0))
    }

    fn __repr__(&self) -> String {
        format!("UniModularMat({}, {}, {}, {})", self.0.a, self.0.b, self.0.c, self.0.d)
    }
}

#[pyclass(name = "QuadInt", frozen, from_py_object, eq, hash)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyQuadInt(quadratic::QuadInt);

#[pymethods]
impl PyQuadInt {
    #[new]
    fn new(x: i64, y: i64) -> Self {
        PyQuadInt(quadratic::QuadInt::new(x, y))
    }

    #[getter]
    fn x(&self) -> i64 {
        self.0.x
    }

    #[getter]
    fn y(&self) -> i64 {
        self.0.y
    }

    fn norm(&self) -> i128 {
        self.0.norm()
    }

    fn sigma(&self) -> Self {
        PyQuadInt(self.0.sigma())
    }

    fn is_totally_positive(&self) -> bool {
        self.0.is_totally_positive()
    }

    fn lambda_angle(&self) -> PyResult<f64> {
        quadratic::lambda_angle(self.0).map_err(to_py)
    }

    /// Canonical representative of the class modulo ε².
    fn reduce(&self) -> PyResult<Self> {
        quadratic::reduce_class(self.0).map(|c| PyQuadInt(c.rep)).map_err(to_py)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __repr__(&self) -> String {
        format!("QuadInt({}, {})", self.0.x, self.0.y)
    }
}

#[pyclass(name = "HypDecomposition", frozen, get_all, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyHypDecomposition {
    y1: f64,
    y2: f64,
    v: f64,
    delta1: u8,
    delta2: u8,
    sign: i8,
}

impl PyHypDecomposition {
    fn inner(&self) -> quaternion::HypDecomposition {
        quaternion::HypDecomposition {
            y1: self.y1,
            y2: self.y2,
            v: self.v,
            delta1: self.delta1,
            delta2: self.delta2,
            sign: self.sign,
        }
    }
}

#[pymethods]
impl PyHypDecomposition {
    fn recompose(&self) -> [[f64; 2]; 2] {
        quaternion::recompose(&self.inner())
    }

    fn __repr__(&self) -> String {
        format!(
            "HypDecomposition(y1={}, y2={}, v={}, delta1={}, delta2={}, sign={})",
            self.y1, self.y2, self.v, self.delta1, self.delta2, self.sign
        )
    }
}

#[pyclass(name = "QuatMat", frozen, from_py_object, eq, hash)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyQuatMat(quaternion::QuatMat);

#[pymethods]
impl PyQuatMat {
    #[new]
    fn new(x0: i64, x1: i64, x2: i64, x3: i64) -> PyResult<Self> {
        quaternion::QuatMat::new(x0, x1, x2, x3).map(PyQuatMat).map_err(to_py)
    }

    fn coords(&self) -> (i64, i64, i64, i64) {
        let q = self.0;
        (q.x0, q.x1, q.x2, q.x3)
    }

    fn z1(&self) -> PyQuadInt {
        PyQuadInt(self.0.z1())
    }

    fn z2(&self) -> PyQuadInt {
        PyQuadInt(self.0.z2())
    }

    fn embed(&self) -> [[f64; 2]; 2] {
        self.0.embed()
    }

    fn classify(&self) -> &'static str {
        match quaternion::classify(&self.0.embed()) {
            quaternion::Class::InS => "in_s",
            quaternion::Class::InSNotS => "in_S_not_s",
            quaternion::Class::Generic => "generic",
        }
    }

    fn decompose(&self) -> PyResult<PyHypDecomposition> {
        let h = quaternion::hyperbolic_decompose(&self.0.embed()).map_err(to_py)?;
        Ok(PyHypDecomposition { y1: h.y1, y2: h.y2, v: h.v, delta1: h.delta1, delta2: h.delta2, sign: h.sign })
    }

    fn nu(&self) -> PyResult<u64> {
        quaternion::nu(&self.0).map_err(to_py)
    }

    fn delta(&self) -> u128 {
        self.0.delta()
    }

    fn inverse(&self) -> Self {
        PyQuatMat(self.0.inverse())
    }

    fn __matmul__(&self, o: &Self) -> PyResult<Self> {
        self.0
            .checked_mul(&o.0)
            .map(PyQuatMat)
            .ok_or_else(|| PyValueError::new_err("product overflows 64 bits"))
    }

    fn __repr__(&self) -> String {
        format!("QuatMat({}, {}, {}, {})", self.0.x0, self.0.x1, self.0.x2, self.0.x3)
    }
}

#[pyclass(name = "StatReport", frozen)]
struct PyStatReport(report::StatReport);

#[pymethods]
impl PyStatReport {
    #[getter]
    fn x_lo(&self) -> u64 {
        self.0.x_lo
    }

    #[getter]
    fn x_hi(&self) -> u64 {
        self.0.x_hi
    }

    #[getter]
    fn mode(&self) -> String {
        format!("{:?}", self.0.mode)
    }

    #[getter]
    fn count(&self) -> u64 {
        self.0.count
    }

    #[getter]
    fn weighted_sum(&self) -> f64 {
        self.0.weighted_sum
    }

    #[getter]
    fn complex_sum(&self) -> Complex {
        pair(self.0.complex())
    }

    #[getter]
    fn reference_constant(&self) -> f64 {
        self.0.reference_constant
    }

    #[getter]
    fn main_term(&self) -> f64 {
        self.0.main_term
    }

    #[getter]
    fn ratio(&self) -> f64 {
        self.0.ratio
    }

    #[getter]
    fn normalized_magnitude(&self) -> f64 {
        self.0.normalized_magnitude
    }

    #[getter]
    fn metadata(&self) -> BTreeMap<String, String> {
        self.0.metadata.clone()
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "StatReport(mode={:?}, x=[{}, {}], count={}, ratio={})",
            self.0.mode, self.0.x_lo, self.0.x_hi, self.0.count, self.0.ratio
        )
    }
}

fn report(r: hyperlab::Result<report::StatReport>) -> PyResult<PyStatReport> {
    r.map(PyStatReport).map_err(to_py)
}

#[pyfunction]
fn enumerate_norm(n: u64) -> PyResult<Vec<PyUniModularMat>> {
    Ok(elliptic::enumerate_norm(n).map_err(to_py)?.into_iter().map(PyUniModularMat).collect())
}

#[pyfunction]
fn s_e_direct(m1: i64, m2: i64, n: u64) -> PyResult<Complex> {
    elliptic::s_e_direct(m1, m2, n).map(pair).map_err(to_py)
}

#[pyfunction]
fn s_e_factored(m1: i64, m2: i64, n: u64) -> Complex {
    pair(elliptic::s_e_factored(m1, m2, n))
}

#[pyfunction]
fn count_range(py: Python<'_>, x: u64) -> PyResult<PyStatReport> {
    report(py.detach(|| elliptic::count_range(x)))
}

#[pyfunction]
#[pyo3(signature = (m1, m2, x, shift = 2))]
fn prime_weyl_a(py: Python<'_>, m1: i64, m2: i64, x: u64, shift: u64) -> PyResult<PyStatReport> {
    report(py.detach(|| elliptic::prime_weyl_a(m1, m2, shift, x)))
}

#[pyfunction]
fn r2(n: u64) -> u64 {
    gaussian::r2(n)
}

#[pyfunction]
fn weyl_wp(m: i64, n: u64) -> PyResult<Complex> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be positive"));
    }
    Ok(pair(gaussian::weyl_wp(m, n)))
}

#[pyfunction]
fn d_k(n: u64) -> Vec<PyQuadInt> {
    quadratic::d_k(n).into_iter().map(|c| PyQuadInt(c.rep)).collect()
}

#[pyfunction]
fn n2(n: u64) -> PyResult<u64> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be positive"));
    }
    Ok(quadratic::n2(n))
}

#[pyfunction]
fn u_k(k: i64, n: u64) -> PyResult<Complex> {
    quadratic::u_k(k, n).map(pair).map_err(to_py)
}

#[pyfunction]
fn enumerate_cosets(n: u64) -> PyResult<Vec<PyQuatMat>> {
    Ok(quaternion::enumerate_cosets(n).map_err(to_py)?.into_iter().map(PyQuatMat).collect())
}

#[pyfunction]
fn s_h(n1: i64, n2: i64, n: u64) -> Complex {
    pair(quaternion::s_h(n1, n2, n))
}

#[pyfunction]
fn s_h_direct(n1: i64, n2: i64, n: u64) -> PyResult<Complex> {
    quaternion::s_h_direct(n1, n2, n).map(pair).map_err(to_py)
}

#[pyfunction]
fn count_range_h(py: Python<'_>, x: u64) -> PyResult<PyStatReport> {
    report(py.detach(|| quaternion::count_range_h(x)))
}

#[pyfunction]
fn psi_h(py: Python<'_>, x: u64) -> PyResult<PyStatReport> {
    report(py.detach(|| quaternion::psi_h(x)))
}

#[pyfunction]
fn pi_h(py: Python<'_>, x: u64) -> PyResult<PyStatReport> {
    report(py.detach(|| quaternion::pi_h(x)))
}

#[pyfunction]
fn titchmarsh_sum(py: Python<'_>, x: u64, residue: u64) -> PyResult<PyStatReport> {
    report(py.detach(|| quaternion::titchmarsh_sum(x, residue)))
}

#[pyfunction]
fn prime_weyl_b(py: Python<'_>, n1: i64, n2: i64, x: u64) -> PyResult<PyStatReport> {
    report(py.detach(|| quaternion::prime_weyl_b(n1, n2, x)))
}

#[pyfunction]
fn li(x: f64) -> PyResult<f64> {
    hyperlab::analytics::li::try_li(x).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (cutoff = euler::DEFAULT_CUTOFF))]
fn constants(py: Python<'_>, cutoff: u64) -> PyResult<Bound<'_, PyDict>> {
    let k = py.detach(|| euler::constants(cutoff)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("cutoff", k.cutoff)?;
    d.set_item("log_eps", k.log_eps)?;
    d.set_item("l1_chi8", k.l1_chi8)?;
    d.set_item("chi4_product", k.chi4_product)?;
    d.set_item("chi8_product_without_5", k.chi8_product_without_5)?;
    d.set_item("tail_bound", k.tail_bound)?;
    d.set_item("k_elliptic_shifted", k.k_elliptic_shifted)?;
    d.set_item("c", k.c)?;
    d.set_item("c_prime", k.c_prime)?;
    d.set_item("hyperbolic_count", k.hyperbolic_count)?;
    Ok(d)
}

/// Torus points of the named sequence (`E`, `E_shifted`, `h`, `script_E`, `script_H`).
#[pyfunction]
#[pyo3(signature = (case, x, primes_only = false))]
fn build_sample(py: Python<'_>, case: &str, x: u64, primes_only: bool) -> PyResult<Vec<(f64, f64)>> {
    let case: Case = case.parse().map_err(to_py)?;
    let s = py.detach(|| equidist::build_sample(case, x, primes_only)).map_err(to_py)?;
    Ok(s.points)
}

/// Normalized Weyl sums keyed by `(m1, m2)`.
#[pyfunction]
#[pyo3(signature = (points, max_freq = 3))]
fn weyl_table(py: Python<'_>, points: Vec<(f64, f64)>, max_freq: i64) -> PyResult<BTreeMap<(i64, i64), f64>> {
    let sample = equidist::TorusSample::new(points);
    let t = py.detach(|| equidist::weyl_table(&sample, max_freq)).map_err(to_py)?;
    Ok((-max_freq..=max_freq)
        .flat_map(|a| (-max_freq..=max_freq).map(move |b| (a, b)))
        .map(|(a, b)| ((a, b), t.entry(a, b)))
        .collect())
}

#[pyfunction]
#[pyo3(signature = (points, grid = 8))]
fn box_discrepancy(points: Vec<(f64, f64)>, grid: usize) -> PyResult<f64> {
    equidist::box_discrepancy(&equidist::TorusSample::new(points), grid).map_err(to_py)
}

#[pymodule]
pub fn hyperlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    m.add_class::<PyGaussInt>()?;
    m.add_class::<PyUniModularMat>()?;
    m.add_class::<PyQuadInt>()?;
    m.add_class::<PyQuatMat>()?;
    m.add_class::<PyHypDecomposition>()?;
    m.add_class::<PyStatReport>()?;
    m.add_function(wrap_pyfunction!(enumerate_norm, m)?)?;
    m.add_function(wrap_pyfunction!(s_e_direct, m)?)?;
    m.add_function(wrap_pyfunction!(s_e_factored, m)?)?;
    m.add_function(wrap_pyfunction!(count_range, m)?)?;
    m.add_function(wrap_pyfunction!(prime_weyl_a, m)?)?;
    m.add_function(wrap_pyfunction!(r2, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_wp, m)?)?;
    m.add_function(wrap_pyfunction!(d_k, m)?)?;
    m.add_function(wrap_pyfunction!(n2, m)?)?;
    m.add_function(wrap_pyfunction!(u_k, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_cosets, m)?)?;
    m.add_function(wrap_pyfunction!(s_h, m)?)?;
    m.add_function(wrap_pyfunction!(s_h_direct, m)?)?;
    m.add_function(wrap_pyfunction!(count_range_h, m)?)?;
    m.add_function(wrap_pyfunction!(psi_h, m)?)?;
    m.add_function(wrap_pyfunction!(pi_h, m)?)?;
    m.add_function(wrap_pyfunction!(titchmarsh_sum, m)?)?;
    m.add_function(wrap_pyfunction!(prime_weyl_b, m)?)?;
    m.add_function(wrap_pyfunction!(li, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(build_sample, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_table, m)?)?;
    m.add_function(wrap_pyfunction!(box_discrepancy, m)?)?;
    Ok(())
}
