//! Python bindings for `cantor_hankel`.

use cantor_hankel::kernel::{DfaoFormat, DEFAULT_STATE_CAP};
use cantor_hankel::pade::{self, IrrationalityEstimate};
use cantor_hankel::recurrence::DEFAULT_GRID_LIMIT;
use cantor_hankel::series::{self as series_mod, PeriodicSeries};
use cantor_hankel::verify::{self as verify_mod, VerifyOptions};
use cantor_hankel::{hankel, Dfao2D, KernelExpr, Kind};
use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(kind: &str) -> PyResult<Kind> {
    match kind.to_ascii_lowercase().as_str() {
        "gamma" | "g" | "c" => Ok(Kind::Gamma),
        "delta" | "d" => Ok(Kind::Delta),
        other => Err(PyValueError::new_err(format!("unknown kind {other:?}, expected 'gamma' or 'delta'"))),
    }
}

/// Memoized mod-3 determinants `|Γ_n^p|` and `|Δ_n^p|`.
#[pyclass(name = "Engine", frozen)]
struct PyEngine {
    inner: cantor_hankel::Engine,
}

#[pymethods]
impl PyEngine {
    #[new]
    fn new() -> Self {
        PyEngine { inner: cantor_hankel::Engine::new() }
    }

    fn gamma(&self, n: u64, p: u64) -> PyResult<u8> {
        if i64::try_from(n).is_err() {
            return Err(PyValueError::new_err("engine indices are limited to n <= 2**63 - 1; use Dfao for larger n"));
        }
        Ok(self.inner.gamma(n, p).value())
    }

    fn delta(&self, n: i64, p: u64) -> PyResult<u8> {
        if n < -1 {
            return Err(PyValueError::new_err("delta is defined for n >= -1"));
        }
        Ok(self.inner.delta(n, p).value())
    }

    /// Rows `n = 1..=n_max`, columns `p = 0..=p_max`.
    #[pyo3(signature = (n_max, p_max, kind = "gamma"))]
    fn grid(&self, py: Python<'_>, n_max: u64, p_max: u64, kind: &str) -> PyResult<Vec<Vec<u32>>> {
        let kind = parse_kind(kind)?;
        let grid = py
            .detach(|| self.inner.grid_for_limited(kind, 1, n_max, 0, p_max, DEFAULT_GRID_LIMIT))
            .map_err(value_err)?;
        Ok((1..=n_max).map(|n| grid.row(n).iter().map(|r| r.value() as u32).collect()).collect())
    }

    /// Minimal period of `n ↦ |Γ_n^p| mod 3`.
    fn column_period(&self, p: u64) -> PyResult<u64> {
        self.inner.column_period(p).map(|c| c.period).map_err(value_err)
    }

    /// `(numerator, period)` of the column series, numerator over F₃.
    #[pyo3(signature = (p, kind = "gamma"))]
    fn series(&self, p: u64, kind: &str) -> PyResult<(Vec<u32>, usize)> {
        let s = column(&self.inner, parse_kind(kind)?, p)?;
        let r = s.to_rational();
        Ok((r.numerator_values().into_iter().map(u32::from).collect(), r.period))
    }

    #[pyo3(signature = (p, kind = "gamma"))]
    fn series_text(&self, p: u64, kind: &str) -> PyResult<String> {
        Ok(column(&self.inner, parse_kind(kind)?, p)?.to_rational().to_string())
    }

    /// Runs the built-in checks; returns `(passed, report)`.
    #[pyo3(signature = (n_max = 20, p_max = 27, oracle = false, kernel_cap = DEFAULT_STATE_CAP))]
    fn verify(&self, py: Python<'_>, n_max: u64, p_max: u64, oracle: bool, kernel_cap: usize) -> (bool, String) {
        let options = VerifyOptions { oracle, n_max, p_max, kernel_cap };
        let report = py.detach(|| verify_mod::verify(&self.inner, &options));
        (report.passed(), report.to_text())
    }
}

fn column(engine: &cantor_hankel::Engine, kind: Kind, p: u64) -> PyResult<PeriodicSeries> {
    match kind {
        Kind::Gamma => series_mod::series_gamma(engine, p),
        Kind::Delta => series_mod::series_delta(engine, p),
    }
    .map_err(value_err)
}

/// Two-dimensional automaton for a kernel expression, read on base-3 digit pairs of `(n, p)`.
#[pyclass(name = "Dfao", frozen)]
struct PyDfao {
    inner: Dfao2D,
}

#[pymethods]
impl PyDfao {
    /// `start` is `"gamma"`, `"delta"`, or a kernel expression such as `"G*D[-1,0]"`.
    #[new]
    #[pyo3(signature = (start = "gamma", cap = DEFAULT_STATE_CAP))]
    fn new(py: Python<'_>, start: &str, cap: usize) -> PyResult<Self> {
        let expr = match parse_kind(start) {
            Ok(kind) => KernelExpr::base(kind),
            Err(_) => start.parse::<KernelExpr>().map_err(value_err)?,
        };
        let engine = cantor_hankel::Engine::new();
        let inner = py.detach(|| cantor_hankel::kernel::build_dfao(&engine, &expr, cap)).map_err(value_err)?;
        Ok(PyDfao { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn evaluate(&self, n: BigUint, p: BigUint) -> u8 {
        self.inner.evaluate(&n, &p).value()
    }

    /// `"table"` or `"dot"`.
    #[pyo3(signature = (format = "table"))]
    fn export(&self, format: &str) -> PyResult<String> {
        let format = match format {
            "table" => DfaoFormat::Table,
            "dot" => DfaoFormat::Dot,
            other => return Err(PyValueError::new_err(format!("unknown format {other:?}"))),
        };
        Ok(self.inner.export(format))
    }
}

/// Exact determinant of the `n × n` Hankel matrix at shift `p`.
#[pyfunction]
#[pyo3(signature = (n, p, kind = "gamma"))]
fn det_exact(n: usize, p: u64, kind: &str) -> PyResult<BigInt> {
    Ok(hankel::hankel_det(parse_kind(kind)?, p, n))
}

#[pyfunction]
#[pyo3(signature = (n, p, kind = "gamma"))]
fn det_mod3(n: usize, p: u64, kind: &str) -> PyResult<u8> {
    Ok(hankel::hankel_det_mod3(parse_kind(kind)?, p, n).value())
}

/// Terms `start..start+count` of the Cantor sequence (`"c"`) or of `cₙ + cₙ₊₂` (`"d"`).
#[pyfunction]
#[pyo3(signature = (kind, start, count))]
fn sequence(kind: &str, start: u64, count: u64) -> PyResult<Vec<u32>> {
    let kind = parse_kind(kind)?;
    Ok((start..start + count).map(|n| kind.term(n) as u32).collect())
}

/// `(numerator, denominator)` coefficient lists of the order-`n` approximant.
#[pyfunction]
fn pade_approximant(n: usize) -> PyResult<(Vec<BigInt>, Vec<BigInt>)> {
    let a = pade::pade(n).map_err(value_err)?;
    Ok((a.numerator.coefficients().to_vec(), a.denominator.coefficients().to_vec()))
}

/// Whether the error term of the order-`n` approximant has the expected leading coefficient.
#[pyfunction]
fn pade_error_holds(n: usize) -> PyResult<bool> {
    Ok(pade::verify_pade_error(n).map_err(value_err)?.holds)
}

#[pyfunction]
fn functional_equation_holds(deg: usize) -> PyResult<bool> {
    Ok(pade::verify_functional_equation(deg).map_err(value_err)?.holds)
}

fn estimate_dict<'py>(py: Python<'py>, e: &IrrationalityEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", e.n)?;
    d.set_item("p", e.p.clone())?;
    d.set_item("q", e.q.clone())?;
    d.set_item("mu_lower", e.mu_lower)?;
    d.set_item("mu_upper", e.mu_upper)?;
    d.set_item("degenerate", e.degenerate)?;
    Ok(d)
}

/// Rigorous enclosures of `−ln|ξ − p/q| / ln q` for the approximants of orders `1..=n_max`.
#[pyfunction]
#[pyo3(signature = (b, n_max = 12))]
fn irrationality_estimates<'py>(py: Python<'py>, b: u64, n_max: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let estimates = py.detach(|| pade::irrationality_estimates(b, n_max)).map_err(value_err)?;
    estimates.iter().map(|e| estimate_dict(py, e)).collect()
}

/// Overlap of the two candidate reductions of `Σ dₖ b⁻ᵏ` at the given depth.
#[pyfunction]
#[pyo3(signature = (b, depth = 60))]
fn eta_check<'py>(py: Python<'py>, b: u64, depth: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = pade::eta_identity_check(b, depth).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("lhs", r.lhs.midpoint_f64())?;
    d.set_item("stated_rhs", r.stated.rhs.midpoint_f64())?;
    d.set_item("stated_holds", r.stated.holds)?;
    d.set_item("corrected_rhs", r.corrected.rhs.midpoint_f64())?;
    d.set_item("corrected_holds", r.corrected.holds)?;
    Ok(d)
}

#[pymodule]
fn cantor_hankel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEngine>()?;
    m.add_class::<PyDfao>()?;
    m.add_function(wrap_pyfunction!(det_exact, m)?)?;
    m.add_function(wrap_pyfunction!(det_mod3, m)?)?;
    m.add_function(wrap_pyfunction!(sequence, m)?)?;
    m.add_function(wrap_pyfunction!(pade_approximant, m)?)?;
    m.add_function(wrap_pyfunction!(pade_error_holds, m)?)?;
    m.add_function(wrap_pyfunction!(functional_equation_holds, m)?)?;
    m.add_function(wrap_pyfunction!(irrationality_estimates, m)?)?;
    m.add_function(wrap_pyfunction!(eta_check, m)?)?;
    Ok(())
}
