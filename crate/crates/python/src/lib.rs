use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyNotImplementedError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use sharpsphere_core::eigencalc::{self, ExactScaled, LambdaRow};
use sharpsphere_core::measures::{self, Exponent};
use sharpsphere_core::spherequad::{self, TrialFunction};
use sharpsphere_core::verifier::{self, Report as CoreReport};
use sharpsphere_core::{orthopoly, Error};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Range(_) => PyValueError::new_err(e.to_string()),
        Error::Unsupported(_) => PyNotImplementedError::new_err(e.to_string()),
        Error::Convergence(_) => PyArithmeticError::new_err(e.to_string()),
    }
}

/// Accepts a float or the string "inf".
fn exponent(q: &Bound<'_, PyAny>) -> PyResult<Exponent> {
    if let Ok(s) = q.extract::<String>() {
        return Exponent::parse(&s).map_err(py_err);
    }
    let x: f64 = q.extract()?;
    Exponent::parse(&x.to_string()).map_err(py_err)
}

fn exact_tuple(py: Python<'_>, e: &ExactScaled) -> PyResult<Py<PyAny>> {
    Ok((e.coeff.numer().clone(), e.coeff.denom().clone(), e.omega_index)
        .into_pyobject(py)?
        .into_any()
        .unbind())
}

/// Λ_k(φ_d) for k = 0..=kmax as (numerator, denominator, omega_index),
/// meaning numerator/denominator · ω_{omega_index}.
#[pyfunction]
fn lambda_exact(py: Python<'_>, d: u32, kmax: usize) -> PyResult<Vec<Py<PyAny>>> {
    let rows = eigencalc::lambda_exact(d, kmax).map_err(py_err)?;
    rows.iter().map(|e| exact_tuple(py, e)).collect()
}

#[pyfunction]
fn lambda_closed(py: Python<'_>, d: u32, k: usize) -> PyResult<Py<PyAny>> {
    exact_tuple(py, &eigencalc::lambda_closed(d, k).map_err(py_err)?)
}

#[pyfunction]
fn lambda_numeric(d: u32, k: usize) -> PyResult<f64> {
    eigencalc::lambda_numeric(d, k).map_err(py_err)
}

fn row_dict<'py>(py: Python<'py>, r: &LambdaRow) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("d", r.d)?;
    out.set_item("k", r.k)?;
    out.set_item("exact", r.exact.as_ref().map(|e| exact_tuple(py, e)).transpose()?)?;
    out.set_item("closed_form_match", r.closed_form_match())?;
    out.set_item("numeric", r.numeric)?;
    out.set_item("sign", r.sign.symbol())?;
    Ok(out)
}

/// Eigenvalue table rows as dicts.
#[pyfunction]
fn sign_report<'py>(py: Python<'py>, d: u32, kmax: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = eigencalc::sign_report(d, kmax).map_err(py_err)?;
    rows.iter().map(|r| row_dict(py, r)).collect()
}

#[pyfunction]
fn sigma_hat(d: u32, r: f64) -> PyResult<f64> {
    measures::sigma_hat(d, r).map_err(py_err)
}

#[pyfunction]
fn conv2(d: u32, r: f64) -> PyResult<f64> {
    measures::conv2(d, r).map_err(py_err)
}

/// ‖σ̂‖_{L^{2k}(ℝ^d)}.
#[pyfunction]
fn sigma_hat_norm(d: u32, k: u32) -> PyResult<f64> {
    measures::sigma_hat_norm(d, k).map_err(py_err)
}

/// Sharp constant C(d, 2k, q) with its method and cross-check.
#[pyfunction]
fn sharp_constant<'py>(py: Python<'py>, d: u32, k: u32, q: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let c = measures::sharp_constant(d, k, exponent(q)?).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("d", c.d)?;
    out.set_item("p", 2 * c.k)?;
    out.set_item("q", c.q.to_string())?;
    out.set_item("value", c.value)?;
    let method = match c.method {
        measures::Method::PlancherelBessel => "plancherel-bessel",
        measures::Method::ClosedFormD4 => "closed-form-d4",
        measures::Method::Convolution => "convolution",
    };
    out.set_item("method", method)?;
    out.set_item("cross_check_value", c.cross_check.map(|x| x.value))?;
    out.set_item("cross_check_rel_err", c.cross_check.map(|x| x.rel_err))?;
    Ok(out)
}

/// Nodes and weights of the Gauss–Jacobi rule for (1−t)^a (1+t)^b.
#[pyfunction]
fn gauss_jacobi(n: usize, a: f64, b: f64) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let rule = orthopoly::gauss_jacobi(n, a, b).map_err(py_err)?;
    Ok((rule.nodes, rule.weights))
}

/// Radial density of the fold-th convolution power of σ.
#[pyclass(frozen)]
struct RadialProfile {
    inner: measures::RadialProfile,
}

#[pymethods]
impl RadialProfile {
    #[new]
    #[pyo3(signature = (d, fold, grid = measures::DEFAULT_GRID))]
    fn new(d: u32, fold: u32, grid: usize) -> PyResult<Self> {
        Ok(Self { inner: measures::conv_profile(d, fold, grid).map_err(py_err)? })
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.inner.dim
    }

    #[getter]
    fn fold(&self) -> u32 {
        self.inner.fold
    }

    fn __call__(&self, r: f64) -> f64 {
        self.inner.eval(r)
    }

    fn radii(&self) -> Vec<f64> {
        self.inner.radii()
    }

    fn values(&self) -> Vec<f64> {
        self.inner.values()
    }

    fn total_mass(&self) -> PyResult<f64> {
        self.inner.total_mass().map_err(py_err)
    }
}

/// A zonal trial function on S^{d−1}.
#[pyclass(frozen, name = "TrialFunction")]
struct PyTrial {
    inner: TrialFunction,
}

#[pymethods]
impl PyTrial {
    #[staticmethod]
    #[pyo3(signature = (d, value = Complex64::new(1.0, 0.0)))]
    fn constant(d: u32, value: Complex64) -> PyResult<Self> {
        Ok(Self { inner: TrialFunction::constant(d, value).map_err(py_err)? })
    }

    #[staticmethod]
    fn plane_wave(d: u32, xi: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: TrialFunction::plane_wave(d, &xi).map_err(py_err)? })
    }

    #[staticmethod]
    fn exponential(d: u32, axis: Vec<f64>, nu: f64) -> PyResult<Self> {
        Ok(Self { inner: TrialFunction::exponential(d, &axis, nu).map_err(py_err)? })
    }

    /// 1 + eps·Y with Y the zonal harmonic of the given degree.
    #[staticmethod]
    fn harmonic_perturbation(d: u32, eps: f64, degree: usize) -> PyResult<Self> {
        Ok(Self { inner: TrialFunction::harmonic_perturbation(d, eps, degree).map_err(py_err)? })
    }

    /// Σ c_n Z_n(u) in normalised zonal harmonics.
    #[staticmethod]
    fn series(d: u32, coeffs: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: TrialFunction::series(d, coeffs).map_err(py_err)? })
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.inner.d
    }

    fn __call__(&self, zeta: Vec<f64>) -> PyResult<Complex64> {
        if zeta.len() != self.inner.d as usize {
            return Err(PyValueError::new_err(format!("point needs {} coordinates", self.inner.d)));
        }
        Ok(self.inner.eval(&zeta))
    }

    /// Value as a function of u = ⟨axis, ζ⟩.
    fn profile(&self, u: f64) -> Complex64 {
        self.inner.profile(u)
    }

    fn lq_norm(&self, q: &Bound<'_, PyAny>) -> PyResult<f64> {
        self.inner.lq_norm(exponent(q)?).map_err(py_err)
    }

    fn zonal_coefficients(&self) -> PyResult<Vec<Complex64>> {
        self.inner.zonal_coefficients().map_err(py_err)
    }

    /// ‖f̂σ‖_{L^p(ℝ^d)} for even p ≥ 4.
    fn extension_norm(&self, p: u32) -> PyResult<f64> {
        spherequad::extension_norm(&self.inner, self.inner.d, p).map_err(py_err)
    }

    /// f̂σ(rω) where ω makes angle theta with the axis.
    fn extension_transform(&self, r: f64, theta: f64) -> PyResult<Complex64> {
        spherequad::extension_transform(&self.inner, r, theta).map_err(py_err)
    }
}

/// Outcome of one numerical check.
#[pyclass(frozen, get_all)]
struct Report {
    name: String,
    lhs: f64,
    rhs: f64,
    stat_error: f64,
    tolerance: f64,
    relation: String,
    verdict: String,
}

impl From<CoreReport> for Report {
    fn from(r: CoreReport) -> Self {
        let label = |v: serde_json::Value| v.as_str().unwrap_or_default().to_owned();
        Self {
            relation: label(serde_json::to_value(r.relation).expect("unit enum")),
            verdict: label(serde_json::to_value(r.verdict).expect("unit enum")),
            name: r.name,
            lhs: r.lhs,
            rhs: r.rhs,
            stat_error: r.stat_error,
            tolerance: r.tolerance,
        }
    }
}

#[pymethods]
impl Report {
    fn __repr__(&self) -> String {
        format!("Report({:?}, {} {} {}, {})", self.name, self.lhs, self.relation, self.rhs, self.verdict)
    }
}

fn reports(r: sharpsphere_core::Result<Vec<CoreReport>>) -> PyResult<Vec<Report>> {
    Ok(r.map_err(py_err)?.into_iter().map(Report::from).collect())
}

#[pyfunction]
#[pyo3(signature = (d, k, q, trials = 4, seed = 1))]
fn verify_thm1(d: u32, k: u32, q: &Bound<'_, PyAny>, trials: usize, seed: u64) -> PyResult<Vec<Report>> {
    reports(verifier::verify_thm1(d, k, exponent(q)?, trials, seed))
}

#[pyfunction]
#[pyo3(signature = (d, pairs = 4, samples = 100_000, seed = 1))]
fn verify_cor3(py: Python<'_>, d: u32, pairs: usize, samples: usize, seed: u64) -> PyResult<Vec<Report>> {
    reports(py.detach(|| verifier::verify_cor3(d, pairs, samples, seed)))
}

#[pyfunction]
#[pyo3(signature = (d, samples = 100_000, seed = 1))]
fn geometric_identity(py: Python<'_>, d: u32, samples: usize, seed: u64) -> PyResult<Report> {
    Ok(py.detach(|| verifier::geometric_identity(d, samples, seed)).map_err(py_err)?.into())
}

#[pyfunction]
#[pyo3(signature = (d, trials = 4, samples = 100_000, seed = 1))]
fn verify_lem11(py: Python<'_>, d: u32, trials: usize, samples: usize, seed: u64) -> PyResult<Vec<Report>> {
    reports(py.detach(|| verifier::verify_lem11(d, trials, samples, seed)))
}

/// Stage values of the four-step chain as (name, value, error), plus the
/// reports comparing consecutive stages.
#[pyfunction]
fn chain_report(f: &PyTrial) -> PyResult<(Vec<(String, f64, f64)>, Vec<Report>)> {
    let c = verifier::chain_report(f.inner.d, &f.inner).map_err(py_err)?;
    let stages = c.stages.into_iter().map(|s| (s.name, s.value, s.error)).collect();
    Ok((stages, c.reports.into_iter().map(Report::from).collect()))
}

#[pymodule]
fn sharpsphere(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<RadialProfile>()?;
    m.add_class::<PyTrial>()?;
    m.add_class::<Report>()?;
    m.add_function(wrap_pyfunction!(lambda_exact, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_closed, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(sign_report, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_hat, m)?)?;
    m.add_function(wrap_pyfunction!(conv2, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_hat_norm, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_constant, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_jacobi, m)?)?;
    m.add_function(wrap_pyfunction!(verify_thm1, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cor3, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_identity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lem11, m)?)?;
    m.add_function(wrap_pyfunction!(chain_report, m)?)?;
    Ok(())
}
