//! Single shooting on the initial costates.
//!
//! The unknowns are the `3s` coordinates of `mu(0)`. A shot integrates the
//! extremal flow from the fixed initial poses and measures the terminal error
//! `log(g_T^-1 g(T))` per agent. Levenberg-Marquardt with a forward-difference
//! Jacobian drives that error to zero.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::dynamics::{integrate, Aborted, DynError, DynOptions, Mode, SystemState, Trajectory};
use crate::error::ValidationError;
use crate::graph::InteractionGraph;
use crate::lie_se2::{Momentum, Pose2, Twist};
use crate::potentials::PotentialParams;
use crate::ControlModel;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryData {
    pub g0: Vec<Pose2>,
    pub g_t: Vec<Pose2>,
    pub horizon: f64,
}

impl BoundaryData {
    pub fn agents(&self) -> usize {
        self.g0.len()
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.g0.is_empty() {
            return Err(ValidationError::new("at least one agent is required"));
        }
        if self.g0.len() != self.g_t.len() {
            return Err(ValidationError::new(format!(
                "{} initial poses but {} targets",
                self.g0.len(),
                self.g_t.len()
            )));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(ValidationError::new(format!("horizon must be positive, got {}", self.horizon)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShootOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Relative forward-difference step, scaled by `max(1, |mu_k|)`.
    pub fd_step: f64,
    pub damping0: f64,
    /// Forwarded to the flow. `dt` is adjusted down so it divides the horizon.
    pub dynamics: DynOptions,
}

impl ShootOptions {
    pub fn new(dynamics: DynOptions) -> Self {
        Self {
            tol: 1e-9,
            max_iter: 50,
            fd_step: 1e-6,
            damping0: 1e-3,
            dynamics,
        }
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(ValidationError::new("tol must be positive"));
        }
        if self.fd_step.is_nan() || self.fd_step <= 0.0 {
            return Err(ValidationError::new("fd_step must be positive"));
        }
        if self.damping0.is_nan() || self.damping0 <= 0.0 {
            return Err(ValidationError::new("damping0 must be positive"));
        }
        self.dynamics.validate()
    }
}

/// Damping grows by this factor on a rejected step and shrinks by it on an accepted one.
const DAMPING_FACTOR: f64 = 4.0;
/// Give up on an iteration once the damping exceeds this.
const DAMPING_MAX: f64 = 1e16;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BvpError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("shot hit a singularity: {0}")]
    Infeasible(DynError),
    #[error("every damped step hit a singularity after {iterations} iterations: {last}")]
    InfeasibleShot { iterations: usize, last: DynError },
    #[error("no convergence after {} iterations (residual {:e})", best.iterations, best.residual_norm)]
    NonConvergence { best: Box<ShootReport> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationLog {
    pub iteration: usize,
    pub residual_norm: f64,
    pub damping: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShootReport {
    pub mu0: Vec<Momentum>,
    pub iterations: usize,
    pub residual: Vec<f64>,
    pub residual_norm: f64,
    pub converged: bool,
    pub log: Vec<IterationLog>,
    pub trajectory: Trajectory,
}

/// Step count and step size covering `horizon` exactly.
pub fn grid(horizon: f64, dt: f64) -> (usize, f64) {
    let n = ((horizon / dt) - 1e-9).ceil().max(1.0) as usize;
    (n, horizon / n as f64)
}

fn flow(
    mu0: &[Momentum],
    boundary: &BoundaryData,
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &DynOptions,
    sample_every: Option<usize>,
) -> Result<Trajectory, Aborted> {
    let (n, dt) = grid(boundary.horizon, opts.dt);
    let mut dyn_opts = opts.clone();
    dyn_opts.dt = dt;
    dyn_opts.sample_every = sample_every.unwrap_or(n);
    let initial = SystemState::new(&boundary.g0, mu0, &params.alpha0);
    integrate(&initial, params, graph, &dyn_opts, n)
}

fn terminal_error(end: &[Pose2], targets: &[Pose2]) -> Vec<f64> {
    end.iter()
        .zip(targets)
        .flat_map(|(g, target)| target.between(g).log().to_array())
        .collect()
}

/// Terminal pose error of the shot from `mu0`, `3s` entries in twist coordinates.
pub fn residual(
    mu0: &[Momentum],
    boundary: &BoundaryData,
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &ShootOptions,
) -> Result<Vec<f64>, BvpError> {
    boundary.validate()?;
    if mu0.len() != boundary.agents() {
        return Err(ValidationError::new("one initial costate per agent is required").into());
    }
    let traj = flow(mu0, boundary, params, graph, &opts.dynamics, None)
        .map_err(|a| BvpError::Infeasible(a.error))?;
    let end = traj.last().expect("trajectory records the final state");
    let poses: Vec<Pose2> = end.agents.iter().map(|a| a.g).collect();
    Ok(terminal_error(&poses, &boundary.g_t))
}

fn unpack(x: &DVector<f64>) -> Vec<Momentum> {
    x.as_slice()
        .chunks(3)
        .map(|c| Momentum::new(c[0], c[1], c[2]))
        .collect()
}

fn pack(mu: &[Momentum]) -> DVector<f64> {
    DVector::from_iterator(mu.len() * 3, mu.iter().flat_map(|m| m.to_array()))
}

fn norm(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Levenberg-Marquardt shooting from `guess`.
pub fn solve_shooting(
    guess: &[Momentum],
    boundary: &BoundaryData,
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &ShootOptions,
) -> Result<ShootReport, BvpError> {
    opts.validate()?;
    boundary.validate()?;
    let dim = 3 * boundary.agents();
    let eval = |x: &DVector<f64>| residual(&unpack(x), boundary, params, graph, opts);

    let mut x = pack(guess);
    let mut r = eval(&x)?;
    let mut r_norm = norm(&r);
    let mut damping = opts.damping0;
    let mut log = vec![IterationLog {
        iteration: 0,
        residual_norm: r_norm,
        damping,
    }];
    let mut iterations = 0;
    let mut stalled = false;

    while r_norm > opts.tol && iterations < opts.max_iter && !stalled {
        iterations += 1;
        let jac = jacobian(&x, &r, opts, &eval)?;
        let rv = DVector::from_column_slice(&r);
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * rv;

        let mut accepted = false;
        let mut last_infeasible: Option<DynError> = None;
        let mut any_feasible = false;
        while damping <= DAMPING_MAX {
            let lhs = &jtj + DMatrix::<f64>::identity(dim, dim) * damping;
            let Some(delta) = lhs.lu().solve(&(-&jtr)) else {
                damping *= DAMPING_FACTOR;
                continue;
            };
            let trial = &x + delta;
            match eval(&trial) {
                Ok(rt) => {
                    any_feasible = true;
                    let n = norm(&rt);
                    if n < r_norm {
                        x = trial;
                        r = rt;
                        r_norm = n;
                        damping = (damping / DAMPING_FACTOR).max(f64::MIN_POSITIVE);
                        accepted = true;
                        break;
                    }
                }
                Err(BvpError::Infeasible(e)) => last_infeasible = Some(e),
                Err(other) => return Err(other),
            }
            damping *= DAMPING_FACTOR;
        }
        if !accepted {
            if !any_feasible {
                if let Some(last) = last_infeasible {
                    return Err(BvpError::InfeasibleShot { iterations, last });
                }
            }
            stalled = true;
            damping = damping.min(DAMPING_MAX);
        }
        log.push(IterationLog {
            iteration: iterations,
            residual_norm: r_norm,
            damping,
        });
    }

    let mu0 = unpack(&x);
    let trajectory = flow(&mu0, boundary, params, graph, &opts.dynamics, Some(opts.dynamics.sample_every))
        .map_err(|a| BvpError::Infeasible(a.error))?;
    let report = ShootReport {
        mu0,
        iterations,
        residual: r,
        residual_norm: r_norm,
        converged: r_norm <= opts.tol,
        log,
        trajectory,
    };
    if report.converged {
        Ok(report)
    } else {
        Err(BvpError::NonConvergence {
            best: Box::new(report),
        })
    }
}

/// Forward-difference Jacobian; falls back to a backward step when the forward
/// shot is singular.
fn jacobian<F>(
    x: &DVector<f64>,
    r: &[f64],
    opts: &ShootOptions,
    eval: &F,
) -> Result<DMatrix<f64>, BvpError>
where
    F: Fn(&DVector<f64>) -> Result<Vec<f64>, BvpError>,
{
    let n = x.len();
    let m = r.len();
    let mut jac = DMatrix::zeros(m, n);
    for k in 0..n {
        let h = opts.fd_step * x[k].abs().max(1.0);
        let mut xp = x.clone();
        xp[k] += h;
        let (rp, h) = match eval(&xp) {
            Ok(rp) => (rp, h),
            Err(BvpError::Infeasible(_)) => {
                let mut xm = x.clone();
                xm[k] -= h;
                match eval(&xm) {
                    Ok(rm) => (rm, -h),
                    Err(BvpError::Infeasible(e)) => {
                        return Err(BvpError::InfeasibleShot { iterations: 0, last: e })
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(e) => return Err(e),
        };
        for i in 0..m {
            jac[(i, k)] = (rp[i] - r[i]) / h;
        }
    }
    Ok(jac)
}

/// Costates for prescribed initial controls `(u1, u2)` per agent, with the
/// unactuated coordinate set to zero.
pub fn costates_from_velocities(u0: &[[f64; 2]], opts: &DynOptions) -> Vec<Momentum> {
    let model = match opts.mode {
        Mode::PaperPrinted => ControlModel::unicycle(),
        Mode::FirstPrinciples => opts.controls,
    };
    u0.iter()
        .map(|u| model.costate_for_controls(&Twist::new(u[0], u[1], 0.0)))
        .collect()
}

/// Initial-value run from initial velocities, the way the reference experiment is set up.
pub fn ivp_run(
    u0: &[[f64; 2]],
    g0: &[Pose2],
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &DynOptions,
    n_steps: usize,
) -> Result<Trajectory, Aborted> {
    let mu0 = costates_from_velocities(u0, opts);
    let initial = SystemState::new(g0, &mu0, &params.alpha0);
    integrate(&initial, params, graph, opts, n_steps)
}
