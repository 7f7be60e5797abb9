//! Reduced extremal flow for a fleet of left-invariant agents on SE(2).
//!
//! Each agent carries a pose `g`, a body costate `mu` and the advected
//! parameter `alpha`. Two vector fields are available:
//!
//! * [`Mode::FirstPrinciples`] assembles the Lie-Poisson system from the kernel
//!   operations: `g' = g w`, `mu' = ad*_w mu + sum_j Gamma_ij + Gamma_i0`,
//!   `alpha' = -[w, alpha]`, with `w = dh/dmu`. The reduced Hamiltonian is a
//!   first integral of this field.
//! * [`Mode::PaperPrinted`] is the closed-form scalar unicycle system with its
//!   published coefficients, kept for replicating the reference experiment.
//!   It does not conserve the Hamiltonian.
//!
//! Poses in the first-principles mode are advanced on the group (`g exp(...)`);
//! the printed mode integrates `(theta, x, y)` as plain coordinates.

use std::fmt;

use thiserror::Error;

use crate::error::{PoleError, PoleKind, ValidationError};
use crate::graph::InteractionGraph;
use crate::lie_se2::{coadjoint_star, dexp_inv, Momentum, Pose2, Twist};
use crate::potentials::{
    grad_obs_ext_with_offset, grad_pair_body, u_ext_with_offset, u_pair, PairGradient,
    PotentialParams,
};

/// Sign in front of the pair gradients in the first-principles momentum equation.
pub const SIGN_PAIR: f64 = 1.0;
/// Sign in front of the obstacle momentum-map term in the first-principles momentum equation.
pub const SIGN_OBS: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    PaperPrinted,
    FirstPrinciples,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::PaperPrinted => "paper_printed",
            Mode::FirstPrinciples => "first_principles",
        }
    }

    pub fn default_pair_gradient(&self) -> PairGradient {
        match self {
            Mode::PaperPrinted => PairGradient::Printed,
            Mode::FirstPrinciples => PairGradient::Rotated,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = ValidationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper_printed" => Ok(Mode::PaperPrinted),
            "first_principles" => Ok(Mode::FirstPrinciples),
            other => Err(ValidationError::new(format!(
                "unknown mode '{other}' (expected paper_printed or first_principles)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    Euler,
    Rk4,
}

impl Integrator {
    pub fn name(&self) -> &'static str {
        match self {
            Integrator::Euler => "euler",
            Integrator::Rk4 => "rk4",
        }
    }
}

impl std::str::FromStr for Integrator {
    type Err = ValidationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euler" => Ok(Integrator::Euler),
            "rk4" => Ok(Integrator::Rk4),
            other => Err(ValidationError::new(format!(
                "unknown integrator '{other}' (expected euler or rk4)"
            ))),
        }
    }
}

/// Actuated directions and drift of an affine left-invariant system
/// `g' = g (u - e0)` with running cost `1/2 |u - e0|^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ControlModel {
    pub actuated: [bool; 3],
    pub drift: Twist,
}

impl Default for ControlModel {
    fn default() -> Self {
        Self::unicycle()
    }
}

impl ControlModel {
    /// Steering along `e1`, rolling along `e2`, no drift.
    pub fn unicycle() -> Self {
        Self {
            actuated: [true, true, false],
            drift: Twist::zero(),
        }
    }

    /// Maximiser `u*` of `<mu, u - e0> - 1/2 |u - e0|^2` over actuated `u`.
    pub fn controls(&self, mu: &Momentum) -> Twist {
        let mu = mu.to_array();
        let e0 = self.drift.to_array();
        let mut u = [0.0; 3];
        for k in 0..3 {
            if self.actuated[k] {
                u[k] = e0[k] + mu[k] / Twist::metric_weight(k);
            }
        }
        Twist::from_array(u)
    }

    /// Body velocity `u* - e0`, which is also `dh/dmu`.
    pub fn velocity(&self, mu: &Momentum) -> Twist {
        self.controls(mu) - self.drift
    }

    /// `<mu, w> - 1/2 |w|^2` at the maximiser.
    pub fn kinetic(&self, mu: &Momentum) -> f64 {
        let w = self.velocity(mu);
        mu.pair(&w) - 0.5 * w.norm_sq()
    }

    /// Costate whose optimal control equals `u` on the actuated directions;
    /// unactuated coordinates are set to zero.
    pub fn costate_for_controls(&self, u: &Twist) -> Momentum {
        let u = u.to_array();
        let e0 = self.drift.to_array();
        let mut mu = [0.0; 3];
        for k in 0..3 {
            if self.actuated[k] {
                mu[k] = Twist::metric_weight(k) * (u[k] - e0[k]);
            }
        }
        Momentum::from_array(mu)
    }
}

/// Unicycle optimal controls: `(mu1 / 2, mu2, 0)`.
pub fn pmp_controls(mu: &Momentum) -> Twist {
    ControlModel::unicycle().controls(mu)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynOptions {
    pub mode: Mode,
    pub integrator: Integrator,
    pub dt: f64,
    pub controls: ControlModel,
    pub pair_gradient: PairGradient,
    /// Record every k-th step (the last step is always recorded).
    pub sample_every: usize,
}

impl DynOptions {
    pub fn new(mode: Mode, integrator: Integrator, dt: f64) -> Self {
        Self {
            mode,
            integrator,
            dt,
            controls: ControlModel::unicycle(),
            pair_gradient: mode.default_pair_gradient(),
            sample_every: 1,
        }
    }

    pub fn with_sample_every(mut self, k: usize) -> Self {
        self.sample_every = k;
        self
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ValidationError::new(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.controls.actuated.iter().any(|&a| a) {
            return Err(ValidationError::new("at least one control direction must be actuated"));
        }
        if self.sample_every == 0 {
            return Err(ValidationError::new("sample_every must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentState {
    pub g: Pose2,
    pub mu: Momentum,
    pub alpha: Twist,
}

impl AgentState {
    /// State with `alpha = Ad_{g^-1} alpha0`.
    pub fn new(g: Pose2, mu: Momentum, alpha0: &Twist) -> Self {
        Self {
            g,
            mu,
            alpha: g.adjoint_inv(alpha0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemState {
    pub agents: Vec<AgentState>,
    pub t: f64,
}

impl SystemState {
    pub fn new(poses: &[Pose2], costates: &[Momentum], alpha0: &Twist) -> Self {
        assert_eq!(poses.len(), costates.len());
        Self {
            agents: poses
                .iter()
                .zip(costates)
                .map(|(g, mu)| AgentState::new(*g, *mu, alpha0))
                .collect(),
            t: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn poses(&self) -> Vec<Pose2> {
        self.agents.iter().map(|a| a.g).collect()
    }
}

/// Time derivative of one agent's state. The pose rate is a body velocity.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct AgentRate {
    pub xi: Twist,
    pub mu_dot: Momentum,
    pub alpha_dot: Twist,
}

impl AgentRate {
    /// `(theta', x', y')` for `g' = g xi`.
    pub fn pose_rate(&self, g: &Pose2) -> [f64; 3] {
        let [dx, dy] = g.rotate([self.xi.v1, self.xi.v2]);
        [self.xi.a, dx, dy]
    }
}

/// Which agents a singular potential belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Offender {
    Pair(usize, usize),
    Agent(usize),
}

impl fmt::Display for Offender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Offender::Pair(i, j) => write!(f, "agents {i} and {j}"),
            Offender::Agent(i) => write!(f, "agent {i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DynError {
    #[error("{kind} singularity for {offender} at t = {t} (denominator {denominator:e})")]
    Singularity {
        kind: PoleKind,
        offender: Offender,
        t: f64,
        denominator: f64,
    },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

impl DynError {
    fn pole(e: PoleError, offender: Offender, t: f64) -> Self {
        DynError::Singularity {
            kind: e.kind,
            offender,
            t,
            denominator: e.denominator,
        }
    }
}

fn check_shapes(
    state: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
) -> Result<(), DynError> {
    let s = state.len();
    if params.agents() != s || graph.agents() != s {
        return Err(ValidationError::new(format!(
            "agent count mismatch: state {s}, params {}, graph {}",
            params.agents(),
            graph.agents()
        ))
        .into());
    }
    Ok(())
}

/// Reduced optimal Hamiltonian for the unicycle control model.
pub fn hamiltonian(
    state: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
) -> Result<f64, DynError> {
    hamiltonian_with(state, params, graph, &ControlModel::unicycle())
}

/// `sum_i [ <mu_i, w_i> - C(w_i) - U_ext(alpha_i) - 1/2 sum_{j in N_i} U_ij ]`.
pub fn hamiltonian_with(
    state: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
    model: &ControlModel,
) -> Result<f64, DynError> {
    check_shapes(state, params, graph)?;
    let offset = params.ext_offset();
    let t = state.t;
    let mut h = 0.0;
    for (i, ai) in state.agents.iter().enumerate() {
        h += model.kinetic(&ai.mu);
        h -= u_ext_with_offset(&ai.alpha, params.sigma_obs[i], offset)
            .map_err(|e| DynError::pole(e, Offender::Agent(i), t))?;
        for &j in graph.neighbors(i) {
            h -= 0.5
                * u_pair(&ai.g, &state.agents[j].g, params.sigma_pair[i][j], params.r_bar)
                    .map_err(|e| DynError::pole(e, Offender::Pair(i, j), t))?;
        }
    }
    Ok(h)
}

/// Reported (not drift-corrected) controls for every agent.
pub fn controls(state: &SystemState, opts: &DynOptions) -> Vec<Twist> {
    state
        .agents
        .iter()
        .map(|a| match opts.mode {
            Mode::PaperPrinted => pmp_controls(&a.mu),
            Mode::FirstPrinciples => opts.controls.controls(&a.mu),
        })
        .collect()
}

/// Sum of pair gradients acting on agent `i`.
fn pair_forces(
    state: &SystemState,
    i: usize,
    params: &PotentialParams,
    graph: &InteractionGraph,
    variant: PairGradient,
) -> Result<Momentum, DynError> {
    let gi = &state.agents[i].g;
    let mut total = Momentum::zero();
    for &j in graph.neighbors(i) {
        total += grad_pair_body(
            gi,
            &state.agents[j].g,
            params.sigma_pair[i][j],
            params.r_bar,
            variant,
        )
        .map_err(|e| DynError::pole(e, Offender::Pair(i, j), state.t))?;
    }
    Ok(total)
}

/// Vector field of the reduced system.
pub fn rhs(
    state: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &DynOptions,
) -> Result<Vec<AgentRate>, DynError> {
    check_shapes(state, params, graph)?;
    let offset = params.ext_offset();
    let mut out = Vec::with_capacity(state.len());
    for (i, ai) in state.agents.iter().enumerate() {
        let pair = pair_forces(state, i, params, graph, opts.pair_gradient)?;
        let obs = grad_obs_ext_with_offset(&ai.alpha, params.sigma_obs[i], offset)
            .map_err(|e| DynError::pole(e, Offender::Agent(i), state.t))?;
        let rate = match opts.mode {
            Mode::PaperPrinted => printed_rate(ai, &pair, &obs),
            Mode::FirstPrinciples => {
                let w = opts.controls.velocity(&ai.mu);
                AgentRate {
                    xi: w,
                    mu_dot: coadjoint_star(&w, &ai.mu) + SIGN_PAIR * pair + SIGN_OBS * obs,
                    alpha_dot: -w.bracket(&ai.alpha),
                }
            }
        };
        out.push(rate);
    }
    Ok(out)
}

/// The published scalar unicycle equations, coefficient for coefficient.
fn printed_rate(a: &AgentState, pair: &Momentum, obs: &Momentum) -> AgentRate {
    let mu = &a.mu;
    let al = &a.alpha;
    let u1 = 0.5 * mu.m1;
    let u2 = mu.m2;
    AgentRate {
        xi: Twist::new(u1, u2, 0.0),
        mu_dot: Momentum::new(
            -0.5 * mu.m2 * mu.m3,
            0.5 * mu.m1 * mu.m3 - obs.m2 + pair.m2,
            -0.5 * mu.m1 * mu.m2 - obs.m3 + pair.m3,
        ),
        alpha_dot: Twist::new(
            0.0,
            0.5 * mu.m1 * al.v2,
            -0.5 * mu.m1 * al.v1 + mu.m2 * al.a,
        ),
    }
}

/// Rate of `(theta, x, y, mu, alpha)` for one agent at `stage`.
#[derive(Clone, Copy)]
struct CoordRate {
    pose: [f64; 3],
    mu: Momentum,
    alpha: Twist,
}

/// Pose rates are rotated with the pose they were evaluated at.
fn coord_rates(stage: &SystemState, rates: &[AgentRate]) -> Vec<CoordRate> {
    stage
        .agents
        .iter()
        .zip(rates)
        .map(|(a, r)| CoordRate {
            pose: r.pose_rate(&a.g),
            mu: r.mu_dot,
            alpha: r.alpha_dot,
        })
        .collect()
}

/// Coordinate update `y + h k` on `(theta, x, y, mu, alpha)`.
fn coord_offset(base: &SystemState, rates: &[CoordRate], h: f64, t: f64) -> SystemState {
    let agents = base
        .agents
        .iter()
        .zip(rates)
        .map(|(a, r)| AgentState {
            g: Pose2::new(
                a.g.theta() + h * r.pose[0],
                a.g.x + h * r.pose[1],
                a.g.y + h * r.pose[2],
            ),
            mu: a.mu + h * r.mu,
            alpha: a.alpha + h * r.alpha,
        })
        .collect();
    SystemState { agents, t }
}

fn step_coordinates(
    state: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &DynOptions,
) -> Result<SystemState, DynError> {
    let h = opts.dt;
    let t0 = state.t;
    let k1 = coord_rates(state, &rhs(state, params, graph, opts)?);
    match opts.integrator {
        Integrator::Euler => Ok(coord_offset(state, &k1, h, t0 + h)),
        Integrator::Rk4 => {
            let s2 = coord_offset(state, &k1, 0.5 * h, t0 + 0.5 * h);
            let k2 = coord_rates(&s2, &rhs(&s2, params, graph, opts)?);
            let s3 = coord_offset(state, &k2, 0.5 * h, t0 + 0.5 * h);
            let k3 = coord_rates(&s3, &rhs(&s3, params, graph, opts)?);
            let s4 = coord_offset(state, &k3, h, t0 + h);
            let k4 = coord_rates(&s4, &rhs(&s4, params, graph, opts)?);
            let combined: Vec<CoordRate> = (0..state.len())
                .map(|i| {
                    let (a, b, c, d) = (k1[i], k2[i], k3[i], k4[i]);
                    CoordRate {
                        pose: std::array::from_fn(|m| {
                            (a.pose[m] + 2.0 * b.pose[m] + 2.0 * c.pose[m] + d.pose[m]) / 6.0
                        }),
                        mu: (1.0 / 6.0) * (a.mu + 2.0 * b.mu + 2.0 * c.mu + d.mu),
                        alpha: (1.0 / 6.0) * (a.alpha + 2.0 * b.alpha + 2.0 * c.alpha + d.alpha),
                    }
                })
                .collect();
            Ok(coord_offset(state, &combined, h, t0 + h))
        }
    }
}

/// Stage state `g0 exp(theta_i)`, `mu0 + h sum a_ij mu'_j`, `alpha0 + ...`.
fn lie_stage(
    base: &SystemState,
    thetas: &[Twist],
    rates: &[AgentRate],
    h: f64,
    t: f64,
) -> SystemState {
    let agents = base
        .agents
        .iter()
        .zip(thetas.iter().zip(rates))
        .map(|(a, (th, r))| AgentState {
            g: a.g.compose(&Pose2::exp(th)),
            mu: a.mu + h * r.mu_dot,
            alpha: a.alpha + h * r.alpha_dot,
        })
        .collect();
    SystemState { agents, t }
}

/// Lie-Euler and the fourth-order Runge-Kutta-Munthe-Kaas scheme.
fn step_lie(
    state: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &DynOptions,
) -> Result<SystemState, DynError> {
    let h = opts.dt;
    let t0 = state.t;
    let k1 = rhs(state, params, graph, opts)?;
    match opts.integrator {
        Integrator::Euler => {
            let th: Vec<Twist> = k1.iter().map(|r| h * r.xi).collect();
            Ok(lie_stage(state, &th, &k1, h, t0 + h))
        }
        Integrator::Rk4 => {
            let big1: Vec<Twist> = k1.iter().map(|r| r.xi).collect();
            let th2: Vec<Twist> = big1.iter().map(|k| (0.5 * h) * *k).collect();
            let s2 = lie_stage(state, &th2, &k1, 0.5 * h, t0 + 0.5 * h);
            let k2 = rhs(&s2, params, graph, opts)?;
            let big2: Vec<Twist> = k2.iter().zip(&th2).map(|(r, th)| dexp_inv(th, &r.xi)).collect();

            let th3: Vec<Twist> = big2.iter().map(|k| (0.5 * h) * *k).collect();
            let s3 = lie_stage(state, &th3, &k2, 0.5 * h, t0 + 0.5 * h);
            let k3 = rhs(&s3, params, graph, opts)?;
            let big3: Vec<Twist> = k3.iter().zip(&th3).map(|(r, th)| dexp_inv(th, &r.xi)).collect();

            let th4: Vec<Twist> = big3.iter().map(|k| h * *k).collect();
            let s4 = lie_stage(state, &th4, &k3, h, t0 + h);
            let k4 = rhs(&s4, params, graph, opts)?;
            let big4: Vec<Twist> = k4.iter().zip(&th4).map(|(r, th)| dexp_inv(th, &r.xi)).collect();

            let f = h / 6.0;
            let agents = (0..state.len())
                .map(|i| {
                    let a = &state.agents[i];
                    let theta = f * (big1[i] + 2.0 * big2[i] + 2.0 * big3[i] + big4[i]);
                    AgentState {
                        g: a.g.compose(&Pose2::exp(&theta)),
                        mu: a.mu
                            + f * (k1[i].mu_dot + 2.0 * k2[i].mu_dot + 2.0 * k3[i].mu_dot + k4[i].mu_dot),
                        alpha: a.alpha
                            + f * (k1[i].alpha_dot
                                + 2.0 * k2[i].alpha_dot
                                + 2.0 * k3[i].alpha_dot
                                + k4[i].alpha_dot),
                    }
                })
                .collect();
            Ok(SystemState { agents, t: t0 + h })
        }
    }
}

/// One fixed step of size `opts.dt`.
pub fn step(
    state: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &DynOptions,
) -> Result<SystemState, DynError> {
    match opts.mode {
        Mode::PaperPrinted => step_coordinates(state, params, graph, opts),
        Mode::FirstPrinciples => step_lie(state, params, graph, opts),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub agents: Vec<AgentState>,
    pub controls: Vec<Twist>,
    pub hamiltonian: f64,
    pub min_pair_dist: f64,
    pub min_obs_clearance: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub steps_taken: usize,
}

impl Trajectory {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Smallest pair distance over all recorded samples.
    pub fn min_pair_dist(&self) -> f64 {
        self.samples.iter().map(|s| s.min_pair_dist).fold(f64::INFINITY, f64::min)
    }

    pub fn min_obs_clearance(&self) -> f64 {
        self.samples.iter().map(|s| s.min_obs_clearance).fold(f64::INFINITY, f64::min)
    }

    /// Largest `|h(t) - h(0)| / max(1, |h(0)|)` over the recorded samples.
    pub fn relative_energy_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        let h0 = first.hamiltonian;
        let scale = h0.abs().max(1.0);
        self.samples
            .iter()
            .map(|s| (s.hamiltonian - h0).abs() / scale)
            .fold(0.0, f64::max)
    }
}

/// Integration stopped early; `partial` holds what was recorded up to the failure.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("integration aborted after {} steps: {error}", partial.steps_taken)]
pub struct Aborted {
    pub error: DynError,
    pub partial: Trajectory,
}

fn record(
    state: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &DynOptions,
) -> Result<Sample, DynError> {
    let model = match opts.mode {
        Mode::PaperPrinted => ControlModel::unicycle(),
        Mode::FirstPrinciples => opts.controls,
    };
    Ok(Sample {
        t: state.t,
        agents: state.agents.clone(),
        controls: controls(state, opts),
        hamiltonian: hamiltonian_with(state, params, graph, &model)?,
        min_pair_dist: min_pair_dist(state),
        min_obs_clearance: min_obs_clearance(state),
    })
}

/// Runs `n_steps` fixed steps from `initial`, recording every
/// `opts.sample_every`-th state plus the final one.
pub fn integrate(
    initial: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
    opts: &DynOptions,
    n_steps: usize,
) -> Result<Trajectory, Aborted> {
    let mut traj = Trajectory::default();
    let fail = |error: DynError, traj: Trajectory| Aborted { error, partial: traj };
    if let Err(e) = opts.validate() {
        return Err(fail(e.into(), traj));
    }
    match record(initial, params, graph, opts) {
        Ok(s) => traj.samples.push(s),
        Err(e) => return Err(fail(e, traj)),
    }
    let mut state = initial.clone();
    for k in 1..=n_steps {
        state = match step(&state, params, graph, opts) {
            Ok(s) => s,
            Err(e) => return Err(fail(e, traj)),
        };
        // Keep the clock on the grid rather than accumulating dt.
        state.t = initial.t + k as f64 * opts.dt;
        traj.steps_taken = k;
        if k % opts.sample_every == 0 || k == n_steps {
            match record(&state, params, graph, opts) {
                Ok(s) => traj.samples.push(s),
                Err(e) => return Err(fail(e, traj)),
            }
        }
    }
    Ok(traj)
}

pub fn min_pair_dist(state: &SystemState) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in state.agents.iter().enumerate() {
        for b in &state.agents[i + 1..] {
            best = best.min((a.g.x - b.g.x).hypot(a.g.y - b.g.y));
        }
    }
    best
}

/// Smallest distance from an agent centre to the obstacle centre.
pub fn min_obs_clearance(state: &SystemState) -> f64 {
    state
        .agents
        .iter()
        .map(|a| a.g.x.hypot(a.g.y))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics {
    /// `None` when a potential is singular at this state.
    pub h: Option<f64>,
    pub min_pair_dist: f64,
    pub min_obs_clearance: f64,
    /// `(mu2)^2 + (mu3)^2` per agent.
    pub casimir: Vec<f64>,
}

pub fn diagnostics(
    state: &SystemState,
    params: &PotentialParams,
    graph: &InteractionGraph,
) -> Diagnostics {
    Diagnostics {
        h: hamiltonian(state, params, graph).ok(),
        min_pair_dist: min_pair_dist(state),
        min_obs_clearance: min_obs_clearance(state),
        casimir: state.agents.iter().map(|a| casimir(&a.mu)).collect(),
    }
}

pub fn casimir(mu: &Momentum) -> f64 {
    mu.m2 * mu.m2 + mu.m3 * mu.m3
}
