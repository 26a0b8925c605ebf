//! Python bindings: receiver states, fidelity, entropy gain, the
//! down-conversion analogue and the acceleration conversions.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rindler_core::entropy::{self, SpectrumKind};
use rindler_core::fock::{spectrum, von_neumann_entropy};
use rindler_core::pdc;
use rindler_core::relativity::{self, AccelerationParams, Units};
use rindler_core::teleport::{self, BellOutcome, LogicalQubit};
use rindler_core::{DensityOperator, Statistics};

fn err(e: rindler_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn statistics(s: &str) -> PyResult<Statistics> {
    s.parse().map_err(err)
}

fn outcome(s: &str) -> PyResult<BellOutcome> {
    s.parse().map_err(err)
}

fn qubit(alpha: Complex64, beta: Complex64) -> PyResult<LogicalQubit> {
    LogicalQubit::normalized(alpha, beta).map_err(err)
}

/// Density operator over a truncated Fock basis.
#[pyclass(name = "DensityOperator", module = "rindler")]
pub struct PyDensityOperator {
    inner: DensityOperator,
}

#[pymethods]
impl PyDensityOperator {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: DensityOperator::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn modes(&self) -> Vec<String> {
        self.inner.modes().iter().map(|m| m.name.clone()).collect()
    }

    /// Occupation tuples in basis order.
    #[getter]
    fn basis(&self) -> Vec<Vec<u32>> {
        self.inner.basis().iter().map(|k| k.0.clone()).collect()
    }

    #[getter]
    fn truncation_deficit(&self) -> f64 {
        self.inner.truncation_deficit()
    }

    fn trace(&self) -> f64 {
        self.inner.trace()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    /// Element `<bra| rho |ket>` by occupations.
    fn element(&self, bra: Vec<u32>, ket: Vec<u32>) -> Complex64 {
        self.inner.element(&bra, &ket)
    }

    fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let d = self.inner.to_dense();
        (0..d.nrows()).map(|i| (0..d.ncols()).map(|j| d[(i, j)]).collect()).collect()
    }

    fn eigenvalues(&self) -> PyResult<Vec<f64>> {
        Ok(spectrum(&self.inner).map_err(err)?.eigenvalues)
    }

    /// Von Neumann entropy in bits.
    fn entropy(&self) -> PyResult<f64> {
        von_neumann_entropy(&self.inner).map_err(err)
    }

    fn partial_trace(&self, keep: Vec<String>) -> PyResult<Self> {
        let keep: Vec<&str> = keep.iter().map(String::as_str).collect();
        Ok(Self { inner: self.inner.partial_trace(&keep).map_err(err)? })
    }

    /// Total-excitation sectors and their weights.
    fn sector_weights(&self) -> Vec<(u32, f64)> {
        teleport::sector_weights(&self.inner).weights
    }

    fn max_abs_diff(&self, other: PyRef<'_, Self>) -> PyResult<f64> {
        self.inner.max_abs_diff(&other.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("DensityOperator(dim={}, trace={:.12})", self.inner.dim(), self.inner.trace())
    }
}

#[pyclass(name = "FidelityReport", module = "rindler", get_all)]
pub struct PyFidelityReport {
    truncated: f64,
    corrected: f64,
    tail: f64,
}

#[pymethods]
impl PyFidelityReport {
    fn __repr__(&self) -> String {
        format!("FidelityReport(corrected={}, truncated={}, tail={})", self.corrected, self.truncated, self.tail)
    }
}

impl From<teleport::FidelityReport> for PyFidelityReport {
    fn from(f: teleport::FidelityReport) -> Self {
        Self { truncated: f.truncated, corrected: f.corrected, tail: f.tail }
    }
}

#[pyclass(name = "InfoGain", module = "rindler", get_all)]
pub struct PyInfoGain {
    s_pre: f64,
    s_post: f64,
    delta: f64,
    n_max: u32,
    tail: f64,
}

#[pymethods]
impl PyInfoGain {
    fn __repr__(&self) -> String {
        format!("InfoGain(delta={}, s_pre={}, s_post={}, n_max={})", self.delta, self.s_pre, self.s_post, self.n_max)
    }
}

/// Two-mode Bogoliubov matrix of the down-conversion analogue.
#[pyclass(name = "SqueezeMatrix", module = "rindler")]
pub struct PySqueezeMatrix {
    inner: pdc::SqueezeMatrix,
}

#[pymethods]
impl PySqueezeMatrix {
    #[new]
    fn new(s11: Complex64, s12: Complex64, s21: Complex64, s22: Complex64) -> Self {
        Self { inner: pdc::SqueezeMatrix::new(s11, s12, s21, s22) }
    }

    #[staticmethod]
    #[pyo3(signature = (r, phi=0.0))]
    fn two_mode(r: f64, phi: f64) -> Self {
        Self { inner: pdc::SqueezeMatrix::two_mode(r, phi) }
    }

    #[staticmethod]
    #[pyo3(signature = (s11, s21, phi=0.0))]
    fn from_s11_s21(s11: f64, s21: f64, phi: f64) -> Self {
        Self { inner: pdc::SqueezeMatrix::from_s11_s21(s11, s21, phi) }
    }

    fn rows(&self) -> [[Complex64; 2]; 2] {
        self.inner.as_rows()
    }

    fn residuals(&self) -> [f64; 3] {
        pdc::validate_bogoliubov(&self.inner)
    }

    fn is_valid(&self) -> bool {
        pdc::is_valid(&self.inner)
    }

    fn inverse(&self) -> PyResult<Self> {
        Ok(Self { inner: pdc::invert_bogoliubov(&self.inner).map_err(err)? })
    }

    /// Amplitudes of `|n>_S |n>_I` in the output vacuum for `n <= n_max`.
    fn vacuum_amplitudes(&self, n_max: u32) -> PyResult<Vec<Complex64>> {
        let v = pdc::pdc_vacuum(&self.inner, n_max).map_err(err)?;
        Ok((0..=n_max).map(|n| v.amplitude(&[n, n])).collect())
    }

    fn idler_state(&self, n_max: u32) -> PyResult<PyDensityOperator> {
        Ok(PyDensityOperator { inner: pdc::reduced_thermal_pdc(&self.inner, n_max).map_err(err)? })
    }

    /// Temperature in kelvin for a mode at `omega` rad/s.
    fn unruh_temperature(&self, omega: f64) -> PyResult<f64> {
        pdc::unruh_temperature_from_matrix(&self.inner, omega).map_err(err)
    }

    fn effective_acceleration(&self, omega: f64) -> PyResult<f64> {
        pdc::effective_acceleration(&self.inner, omega, relativity::C_LIGHT).map_err(err)
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!("SqueezeMatrix(s11={}, s12={}, s21={}, s22={})", s.s11, s.s12, s.s21, s.s22)
    }
}

/// Squeeze parameter for acceleration `a` and mode frequency `omega`
/// (SI unless `natural`).
#[pyfunction]
#[pyo3(signature = (a, omega, statistics="bosonic", natural=false))]
fn squeeze_parameter(a: f64, omega: f64, statistics: &str, natural: bool) -> PyResult<f64> {
    let p = if natural { AccelerationParams::natural(a, omega) } else { AccelerationParams::new(a, omega) };
    Ok(relativity::squeeze(&p.map_err(err)?, self::statistics(statistics)?).map_err(err)?.r)
}

#[pyfunction]
#[pyo3(signature = (a, natural=false))]
fn unruh_temperature(a: f64, natural: bool) -> PyResult<f64> {
    let (p, units) = if natural {
        (AccelerationParams::natural(a, 1.0), Units::Natural)
    } else {
        (AccelerationParams::new(a, 1.0), Units::Si)
    };
    Ok(relativity::unruh_temperature(&p.map_err(err)?, units))
}

/// Receiver state in region I for one Bell outcome, closed form.
#[pyfunction]
#[pyo3(signature = (statistics, r, alpha, beta, outcome="00", n_max=10))]
fn rob_state(
    statistics: &str,
    r: f64,
    alpha: Complex64,
    beta: Complex64,
    outcome: &str,
    n_max: u32,
) -> PyResult<PyDensityOperator> {
    let amps = teleport::conditional_amplitudes(&qubit(alpha, beta)?, self::outcome(outcome)?);
    let inner = teleport::rob_state(self::statistics(statistics)?, &amps, r, n_max).map_err(err)?;
    Ok(PyDensityOperator { inner })
}

/// The same state by running the full protocol; returns the outcome
/// probability and the state.
#[pyfunction]
#[pyo3(signature = (statistics, r, alpha, beta, outcome="00", n_max=10))]
fn rob_state_from_protocol(
    statistics: &str,
    r: f64,
    alpha: Complex64,
    beta: Complex64,
    outcome: &str,
    n_max: u32,
) -> PyResult<(f64, PyDensityOperator)> {
    let (p, inner) = teleport::rob_state_from_protocol(
        self::statistics(statistics)?,
        &qubit(alpha, beta)?,
        self::outcome(outcome)?,
        r,
        n_max,
    )
    .map_err(err)?;
    Ok((p, PyDensityOperator { inner }))
}

/// Teleportation fidelity through the full protocol; averaged over the four
/// outcomes unless one is given.
#[pyfunction]
#[pyo3(signature = (statistics, r, alpha, beta, outcome=None, n_max=40))]
fn fidelity(
    statistics: &str,
    r: f64,
    alpha: Complex64,
    beta: Complex64,
    outcome: Option<&str>,
    n_max: u32,
) -> PyResult<PyFidelityReport> {
    let stats = self::statistics(statistics)?;
    let psi = qubit(alpha, beta)?;
    let outcomes = match outcome {
        Some(o) => vec![self::outcome(o)?],
        None => BellOutcome::all().to_vec(),
    };
    let w = 1.0 / outcomes.len() as f64;
    let mut acc = teleport::FidelityReport { truncated: 0.0, corrected: 0.0, tail: 0.0 };
    for o in outcomes {
        let f = teleport::protocol_fidelity(stats, r, &psi, o, n_max).map_err(err)?;
        acc.truncated += w * f.truncated;
        acc.corrected += w * f.corrected;
        acc.tail = acc.tail.max(f.tail);
    }
    Ok(acc.into())
}

#[pyfunction]
fn fidelity_closed_form(statistics: &str, r: f64) -> PyResult<f64> {
    Ok(teleport::fidelity_closed_form(self::statistics(statistics)?, r))
}

/// Entropy gain in bits from the closed-form spectra, with `n_max` chosen so
/// the dropped weight is below `tail_tol` unless given.
#[pyfunction]
#[pyo3(signature = (statistics, r, tail_tol=1e-8, n_max=None))]
fn info_gain(statistics: &str, r: f64, tail_tol: f64, n_max: Option<u32>) -> PyResult<PyInfoGain> {
    let stats = self::statistics(statistics)?;
    let g = match n_max {
        Some(n) => entropy::info_gain_spectral(stats, r, n),
        None => entropy::info_gain_adaptive(stats, r, tail_tol),
    }
    .map_err(err)?;
    Ok(PyInfoGain { s_pre: g.s_pre, s_post: g.s_post, delta: g.delta, n_max: g.n_max, tail: g.tail })
}

/// Entropy gain by diagonalizing the pre and post states at cap `n_max`.
#[pyfunction]
fn info_gain_numeric(statistics: &str, r: f64, n_max: u32) -> PyResult<f64> {
    entropy::info_gain(self::statistics(statistics)?, r, n_max).map_err(err)
}

#[pyfunction]
fn five_state_model(r: f64) -> PyResult<f64> {
    entropy::five_state_model(r).map_err(err)
}

#[pyfunction]
fn bosonic_gain_limit() -> f64 {
    entropy::bosonic_gain_limit()
}

/// Closed-form eigenvalues; `kind` is "pre", "post" or "vacuum".
#[pyfunction]
fn spectrum_closed_form(kind: &str, statistics: &str, r: f64, n_max: u32) -> PyResult<Vec<f64>> {
    let kind = match kind {
        "pre" => SpectrumKind::Pre,
        "post" => SpectrumKind::Post,
        "vacuum" => SpectrumKind::Vacuum,
        other => return Err(PyValueError::new_err(format!("unknown spectrum kind `{other}`"))),
    };
    entropy::spectrum_closed_form(kind, self::statistics(statistics)?, r, n_max).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (statistics, r, n_max=10))]
fn pre_measurement_state(statistics: &str, r: f64, n_max: u32) -> PyResult<PyDensityOperator> {
    let inner = entropy::pre_measurement_state(self::statistics(statistics)?, r, &LogicalQubit::plus(), n_max);
    Ok(PyDensityOperator { inner: inner.map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (statistics, r, n_max=10))]
fn post_measurement_state(statistics: &str, r: f64, n_max: u32) -> PyResult<PyDensityOperator> {
    let inner = entropy::post_measurement_state(self::statistics(statistics)?, r, n_max);
    Ok(PyDensityOperator { inner: inner.map_err(err)? })
}

#[pymodule]
fn rindler(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityOperator>()?;
    m.add_class::<PyFidelityReport>()?;
    m.add_class::<PyInfoGain>()?;
    m.add_class::<PySqueezeMatrix>()?;
    m.add_function(wrap_pyfunction!(squeeze_parameter, m)?)?;
    m.add_function(wrap_pyfunction!(unruh_temperature, m)?)?;
    m.add_function(wrap_pyfunction!(rob_state, m)?)?;
    m.add_function(wrap_pyfunction!(rob_state_from_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(info_gain, m)?)?;
    m.add_function(wrap_pyfunction!(info_gain_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(five_state_model, m)?)?;
    m.add_function(wrap_pyfunction!(bosonic_gain_limit, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(pre_measurement_state, m)?)?;
    m.add_function(wrap_pyfunction!(post_measurement_state, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
