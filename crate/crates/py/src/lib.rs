//! Python bindings. Poses, twists and momenta are small value classes; the
//! scenario-level entry points take a path to a scenario JSON file.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use liepoisson::bvp::{solve_shooting, BvpError, ShootOptions, ShootReport};
use liepoisson::check::run_checks;
use liepoisson::error::PoleError;
use liepoisson::record::{header, TrajectoryTable};
use liepoisson::scenario::{load_scenario, ScenarioError};
use liepoisson::{lie_se2, potentials, PairGradient};

fn pole_err(e: PoleError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scenario_err(e: ScenarioError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Pose2", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyPose2(pub lie_se2::Pose2);

#[pymethods]
impl PyPose2 {
    #[new]
    #[pyo3(signature = (theta = 0.0, x = 0.0, y = 0.0))]
    fn new(theta: f64, x: f64, y: f64) -> Self {
        Self(lie_se2::Pose2::new(theta, x, y))
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    #[getter]
    fn x(&self) -> f64 {
        self.0.x
    }

    #[getter]
    fn y(&self) -> f64 {
        self.0.y
    }

    fn as_tuple(&self) -> (f64, f64, f64) {
        let [t, x, y] = self.0.to_array();
        (t, x, y)
    }

    /// Row-major 3x3 homogeneous matrix.
    fn matrix(&self) -> Vec<Vec<f64>> {
        let m = self.0.to_matrix();
        (0..3).map(|r| (0..3).map(|c| m[(r, c)]).collect()).collect()
    }

    fn compose(&self, other: &PyPose2) -> Self {
        Self(self.0.compose(&other.0))
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn log(&self) -> PyTwist {
        PyTwist(self.0.log())
    }

    fn adjoint(&self, xi: &PyTwist) -> PyTwist {
        PyTwist(self.0.adjoint(&xi.0))
    }

    fn __mul__(&self, other: &PyPose2) -> Self {
        self.compose(other)
    }

    fn __repr__(&self) -> String {
        format!("Pose2(theta={}, x={}, y={})", self.0.theta(), self.0.x, self.0.y)
    }
}

#[pyclass(name = "Twist", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyTwist(pub lie_se2::Twist);

#[pymethods]
impl PyTwist {
    #[new]
    #[pyo3(signature = (a = 0.0, v1 = 0.0, v2 = 0.0))]
    fn new(a: f64, v1: f64, v2: f64) -> Self {
        Self(lie_se2::Twist::new(a, v1, v2))
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a
    }

    #[getter]
    fn v1(&self) -> f64 {
        self.0.v1
    }

    #[getter]
    fn v2(&self) -> f64 {
        self.0.v2
    }

    fn as_tuple(&self) -> (f64, f64, f64) {
        (self.0.a, self.0.v1, self.0.v2)
    }

    fn bracket(&self, other: &PyTwist) -> Self {
        Self(self.0.bracket(&other.0))
    }

    /// Trace inner product.
    fn inner(&self, other: &PyTwist) -> f64 {
        self.0.inner(&other.0)
    }

    fn exp(&self) -> PyPose2 {
        PyPose2(lie_se2::Pose2::exp(&self.0))
    }

    fn __repr__(&self) -> String {
        format!("Twist(a={}, v1={}, v2={})", self.0.a, self.0.v1, self.0.v2)
    }
}

#[pyclass(name = "Momentum", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyMomentum(pub lie_se2::Momentum);

#[pymethods]
impl PyMomentum {
    #[new]
    #[pyo3(signature = (m1 = 0.0, m2 = 0.0, m3 = 0.0))]
    fn new(m1: f64, m2: f64, m3: f64) -> Self {
        Self(lie_se2::Momentum::new(m1, m2, m3))
    }

    #[getter]
    fn m1(&self) -> f64 {
        self.0.m1
    }

    #[getter]
    fn m2(&self) -> f64 {
        self.0.m2
    }

    #[getter]
    fn m3(&self) -> f64 {
        self.0.m3
    }

    fn as_tuple(&self) -> (f64, f64, f64) {
        (self.0.m1, self.0.m2, self.0.m3)
    }

    fn pair(&self, xi: &PyTwist) -> f64 {
        self.0.pair(&xi.0)
    }

    fn __repr__(&self) -> String {
        format!("Momentum(m1={}, m2={}, m3={})", self.0.m1, self.0.m2, self.0.m3)
    }
}

#[pyfunction]
fn exp(xi: &PyTwist) -> PyPose2 {
    xi.exp()
}

#[pyfunction]
fn log(g: &PyPose2) -> PyTwist {
    g.log()
}

#[pyfunction]
fn coadjoint_star(xi: &PyTwist, mu: &PyMomentum) -> PyMomentum {
    PyMomentum(lie_se2::coadjoint_star(&xi.0, &mu.0))
}

#[pyfunction]
fn pmp_controls(mu: &PyMomentum) -> PyTwist {
    PyTwist(liepoisson::pmp_controls(&mu.0))
}

#[pyfunction]
fn u_pair(gi: &PyPose2, gj: &PyPose2, sigma: f64, r_bar: f64) -> PyResult<f64> {
    potentials::u_pair(&gi.0, &gj.0, sigma, r_bar).map_err(pole_err)
}

#[pyfunction]
fn u_obs(g: &PyPose2, sigma: f64, r_bar: f64) -> PyResult<f64> {
    potentials::u_obs(&g.0, sigma, r_bar).map_err(pole_err)
}

#[pyfunction]
fn u_ext(alpha: &PyTwist, sigma: f64) -> PyResult<f64> {
    potentials::u_ext(&alpha.0, sigma).map_err(pole_err)
}

#[pyfunction]
#[pyo3(signature = (gi, gj, sigma, r_bar, variant = "rotated"))]
fn grad_pair_body(gi: &PyPose2, gj: &PyPose2, sigma: f64, r_bar: f64, variant: &str) -> PyResult<PyMomentum> {
    let variant = match variant {
        "rotated" => PairGradient::Rotated,
        "printed" => PairGradient::Printed,
        other => return Err(PyValueError::new_err(format!("unknown variant '{other}'"))),
    };
    potentials::grad_pair_body(&gi.0, &gj.0, sigma, r_bar, variant)
        .map(PyMomentum)
        .map_err(pole_err)
}

#[pyfunction]
fn grad_obs_ext(alpha: &PyTwist, sigma: f64) -> PyResult<PyMomentum> {
    potentials::grad_obs_ext(&alpha.0, sigma).map(PyMomentum).map_err(pole_err)
}

/// Column name to values.
type Columns = BTreeMap<String, Vec<f64>>;

fn columns(table: &TrajectoryTable) -> Columns {
    header(&table.agent_ids)
        .into_iter()
        .enumerate()
        .map(|(k, name)| (name, table.rows.iter().map(|r| r[k]).collect()))
        .collect()
}

/// Runs a scenario's initial-value problem; returns trajectory columns.
/// Raises on validation failure or singularity abort.
#[pyfunction]
fn simulate(path: &str) -> PyResult<Columns> {
    let sc = load_scenario(path).map_err(scenario_err)?;
    let init = sc.initial_state().map_err(|e| PyValueError::new_err(e.to_string()))?;
    let traj = liepoisson::integrate(&init, &sc.params, &sc.graph, &sc.dynamics, sc.n_steps)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(columns(&TrajectoryTable::from_trajectory(&sc.ids, &traj)))
}

#[pyclass(name = "ShootResult", frozen, skip_from_py_object)]
pub struct PyShootResult {
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    residual_norm: f64,
    #[pyo3(get)]
    mu0: Vec<(f64, f64, f64)>,
    #[pyo3(get)]
    trajectory: Columns,
}

impl PyShootResult {
    fn from_report(ids: &[u32], rep: &ShootReport) -> Self {
        Self {
            converged: rep.converged,
            iterations: rep.iterations,
            residual_norm: rep.residual_norm,
            mu0: rep.mu0.iter().map(|m| (m.m1, m.m2, m.m3)).collect(),
            trajectory: columns(&TrajectoryTable::from_trajectory(ids, &rep.trajectory)),
        }
    }
}

/// Solves the scenario's boundary value problem. A non-converged solve
/// returns the best iterate with `converged == False`.
#[pyfunction]
#[pyo3(signature = (path, tol = 1e-9, max_iter = 50))]
fn shoot(path: &str, tol: f64, max_iter: usize) -> PyResult<PyShootResult> {
    let sc = load_scenario(path).map_err(scenario_err)?;
    let boundary = sc.boundary().map_err(|e| PyValueError::new_err(e.to_string()))?;
    let mut opts = ShootOptions::new(sc.dynamics.clone());
    opts.tol = tol;
    opts.max_iter = max_iter;
    match solve_shooting(&sc.shooting_guess(), &boundary, &sc.params, &sc.graph, &opts) {
        Ok(rep) => Ok(PyShootResult::from_report(&sc.ids, &rep)),
        Err(BvpError::NonConvergence { best }) => Ok(PyShootResult::from_report(&sc.ids, &best)),
        Err(e) => Err(PyRuntimeError::new_err(e.to_string())),
    }
}

/// Invariant checks as `(name, status, value, tol)` rows.
#[pyfunction]
#[pyo3(signature = (path, seed = 1, samples = 1000))]
fn check(path: &str, seed: u64, samples: usize) -> PyResult<Vec<(String, String, f64, f64)>> {
    let file = liepoisson::scenario::read_scenario_file(path).map_err(scenario_err)?;
    let sc = file.build().map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(run_checks(&sc, seed, samples)
        .rows
        .into_iter()
        .map(|r| (r.name, r.status.to_string(), r.value, r.tol))
        .collect())
}

#[pymodule(name = "liepoisson")]
fn liepoisson_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPose2>()?;
    m.add_class::<PyTwist>()?;
    m.add_class::<PyMomentum>()?;
    m.add_class::<PyShootResult>()?;
    m.add_function(wrap_pyfunction!(exp, m)?)?;
    m.add_function(wrap_pyfunction!(log, m)?)?;
    m.add_function(wrap_pyfunction!(coadjoint_star, m)?)?;
    m.add_function(wrap_pyfunction!(pmp_controls, m)?)?;
    m.add_function(wrap_pyfunction!(u_pair, m)?)?;
    m.add_function(wrap_pyfunction!(u_obs, m)?)?;
    m.add_function(wrap_pyfunction!(u_ext, m)?)?;
    m.add_function(wrap_pyfunction!(grad_pair_body, m)?)?;
    m.add_function(wrap_pyfunction!(grad_obs_ext, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(shoot, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
