//! Python bindings for the camforge library: branch enumeration, branch
//! evaluation, time integration, and the spring-assembly laws.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use camforge::{
    design_branches, simulate_reference, simulate_track, BranchLabel, DesignProblem, ForceSpec,
    GsmParams, Method, SimConfig, Termination, TrackBranch,
};

fn err(e: camforge::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// One valid track branch with its admissible open domain.
#[pyclass(name = "Branch", frozen)]
struct Branch {
    inner: TrackBranch,
}

#[pymethods]
impl Branch {
    #[getter]
    fn label(&self) -> &'static str {
        self.inner.label.name()
    }

    #[getter]
    fn sign(&self) -> f64 {
        self.inner.sign
    }

    #[getter]
    fn stiffness(&self) -> f64 {
        self.inner.stiffness
    }

    #[getter]
    fn preload(&self) -> f64 {
        self.inner.preload()
    }

    #[getter]
    fn travel_limit(&self) -> f64 {
        self.inner.travel_limit
    }

    /// Open admissible interval (x_lo, x_hi).
    #[getter]
    fn domain(&self) -> (f64, f64) {
        (self.inner.domain.x_lo, self.inner.domain.x_hi)
    }

    /// Boundary kinds (lo, hi): RootTouch, TravelLimit or SearchTruncated.
    #[getter]
    fn boundary_kinds(&self) -> (&'static str, &'static str) {
        (self.inner.domain.lo_kind.name(), self.inner.domain.hi_kind.name())
    }

    /// Track height Y(x) [m].
    fn height(&self, x: f64) -> PyResult<f64> {
        self.inner.eval(x).map_err(err)
    }

    /// Track slope dY/dX.
    fn slope(&self, x: f64) -> PyResult<f64> {
        self.inner.derivative(x).map_err(err)
    }

    /// Restoring force -K * Y * Y' [N] realized at x.
    fn restoring_force(&self, x: f64) -> PyResult<f64> {
        Ok(-self.inner.stiffness * self.inner.height_slope_product(x).map_err(err)?)
    }

    /// Relative sup reconstruction residual over n Chebyshev samples.
    fn residual(&self, n: usize) -> PyResult<f64> {
        Ok(self.inner.reconstruction_residual(n).map_err(err)?.sup_rel)
    }

    fn __repr__(&self) -> String {
        format!(
            "Branch({}, K={}, d={}, domain=({}, {}))",
            self.inner.label,
            self.inner.stiffness,
            self.inner.preload(),
            self.inner.domain.x_lo,
            self.inner.domain.x_hi
        )
    }
}

fn build_problem(
    force: &str,
    stiffness: f64,
    preload: f64,
    travel_limit: f64,
) -> PyResult<DesignProblem> {
    let force = Arc::new(ForceSpec::parse(force).map_err(err)?);
    DesignProblem::new(force, stiffness, preload, travel_limit).map_err(err)
}

/// Enumerates every valid branch for the target force expression.
#[pyfunction]
fn design(force: &str, stiffness: f64, preload: f64, travel_limit: f64) -> PyResult<Vec<Branch>> {
    let set = design_branches(&build_problem(force, stiffness, preload, travel_limit)?).map_err(err)?;
    Ok(set.branches.into_iter().map(|inner| Branch { inner }).collect())
}

/// Integrates the equation of motion on one designed branch; returns
/// ((t, x, v, e) samples, termination string).
#[pyfunction]
#[pyo3(signature = (force, stiffness, preload, travel_limit, label, mass, x0, v0, dt, t_end, method = "verlet"))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    force: &str,
    stiffness: f64,
    preload: f64,
    travel_limit: f64,
    label: &str,
    mass: f64,
    x0: f64,
    v0: f64,
    dt: f64,
    t_end: f64,
    method: &str,
) -> PyResult<(Vec<(f64, f64, f64, f64)>, String)> {
    let set = design_branches(&build_problem(force, stiffness, preload, travel_limit)?).map_err(err)?;
    let label = BranchLabel::from_name(label)
        .ok_or_else(|| PyValueError::new_err(format!("unknown branch label {label:?}")))?;
    let track = set
        .branch(label)
        .ok_or_else(|| PyValueError::new_err(format!("branch {label} does not exist")))?
        .to_track()
        .map_err(err)?;
    let method = Method::from_name(method)
        .ok_or_else(|| PyValueError::new_err(format!("unknown method {method:?}")))?;
    let config = SimConfig::new(mass, dt, t_end).map_err(err)?.with_method(method);
    let result = simulate_track(&track, &config, x0, v0).map_err(err)?;
    Ok((
        result.samples.iter().map(|s| (s.t, s.x, s.v, s.e)).collect(),
        termination_name(result.termination),
    ))
}

/// Integrates the reference system M * Xdd = F(X) with the same stepper.
#[pyfunction]
#[pyo3(signature = (force, mass, x0, v0, dt, t_end, method = "verlet"))]
fn reference(
    force: &str,
    mass: f64,
    x0: f64,
    v0: f64,
    dt: f64,
    t_end: f64,
    method: &str,
) -> PyResult<(Vec<(f64, f64, f64, f64)>, String)> {
    let force = Arc::new(ForceSpec::parse(force).map_err(err)?);
    let method = Method::from_name(method)
        .ok_or_else(|| PyValueError::new_err(format!("unknown method {method:?}")))?;
    let config = SimConfig::new(mass, dt, t_end).map_err(err)?.with_method(method);
    let result = simulate_reference(&force, &config, x0, v0).map_err(err)?;
    Ok((
        result.samples.iter().map(|s| (s.t, s.x, s.v, s.e)).collect(),
        termination_name(result.termination),
    ))
}

fn termination_name(t: Termination) -> String {
    match t {
        Termination::Completed => "Completed".into(),
        Termination::Locked { .. } => "Locked".into(),
        Termination::DomainExit { .. } => "DomainExit".into(),
        Termination::NonFinite { .. } => "NonFinite".into(),
    }
}

/// Transverse force of the oblique-rod spring assembly [N].
#[pyfunction]
fn gsm_force(k1: f64, k2: f64, b: f64, l: f64, y: f64) -> PyResult<f64> {
    let params = GsmParams::new(k1, k2, b, l).map_err(err)?;
    camforge::gsm_force(&params, y).map_err(err)
}

/// Tangent stiffness of the oblique-rod spring assembly [N/m].
#[pyfunction]
fn gsm_stiffness(k1: f64, k2: f64, b: f64, l: f64, y: f64) -> PyResult<f64> {
    let params = GsmParams::new(k1, k2, b, l).map_err(err)?;
    camforge::gsm_stiffness(&params, y).map_err(err)
}

/// Parses and normalizes a force expression, returning its canonical text.
#[pyfunction]
fn parse_force(text: &str) -> PyResult<String> {
    Ok(ForceSpec::parse(text).map_err(err)?.text())
}

#[pymodule]
fn camforge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Branch>()?;
    m.add_function(wrap_pyfunction!(design, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(reference, m)?)?;
    m.add_function(wrap_pyfunction!(gsm_force, m)?)?;
    m.add_function(wrap_pyfunction!(gsm_stiffness, m)?)?;
    m.add_function(wrap_pyfunction!(parse_force, m)?)?;
    Ok(())
}
