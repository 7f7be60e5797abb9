//! Scenario files (JSON) and their validation.
//!
//! ```json
//! {
//!   "agents": [{"id": 1, "g0": [0.0, 4.0, 0.0], "u0": [0.2, 0.5]}],
//!   "graph": [],
//!   "sigma_pair": {},
//!   "sigma_obs": {"1": 0.5},
//!   "r_bar": 1.0,
//!   "dt": 0.001,
//!   "horizon_T": 5.0,
//!   "mode": "first_principles",
//!   "integrator": "rk4"
//! }
//! ```
//!
//! Poses are `[theta, x, y]`, costates `[m1, m2, m3]`, initial controls
//! `[u1, u2]`. Pair weights are keyed `"i-j"` by agent id; missing weights on
//! graph edges and missing obstacle weights default to 1.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bvp::BoundaryData;
use crate::dynamics::{ControlModel, DynOptions, Integrator, Mode, SystemState};
use crate::error::ValidationError;
use crate::graph::InteractionGraph;
use crate::lie_se2::{Momentum, Pose2, Twist};
use crate::potentials::{PairGradient, PotentialParams};

const DEFAULT_SIGMA: f64 = 1.0;
const DEFAULT_R_BAR: f64 = 1.0;
const STEP_MATCH_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub id: u32,
    pub g0: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u0: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu0: Option<[f64; 3]>,
    #[serde(default, rename = "gT", skip_serializing_if = "Option::is_none")]
    pub g_t: Option<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Raw scenario file contents, before validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub agents: Vec<AgentSpec>,
    #[serde(default)]
    pub graph: Vec<[u32; 2]>,
    #[serde(default)]
    pub sigma_pair: BTreeMap<String, f64>,
    #[serde(default)]
    pub sigma_obs: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstacle: Option<ObstacleSpec>,
    #[serde(default, rename = "horizon_T", skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrator: Option<String>,
    /// `"printed"` or `"rotated"`; defaults by mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_gradient: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_every: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_e0: Option<[f64; 3]>,
    /// Actuated algebra directions, 1-based (`[1, 2]` for the unicycle).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control_dims: Option<Vec<usize>>,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {0}")]
    Validation(#[from] ValidationError),
}

fn invalid(msg: impl Into<String>) -> ValidationError {
    ValidationError::new(msg)
}

/// A validated scenario with defaults applied. Agents are indexed in file order.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub ids: Vec<u32>,
    pub g0: Vec<Pose2>,
    pub u0: Vec<Option<[f64; 2]>>,
    pub mu0: Vec<Option<Momentum>>,
    pub g_t: Vec<Option<Pose2>>,
    pub graph: InteractionGraph,
    pub params: PotentialParams,
    pub horizon: f64,
    pub n_steps: usize,
    pub dynamics: DynOptions,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Structural validation and defaults. Initial feasibility is checked
    /// separately by [`Scenario::check_feasibility`].
    pub fn build(&self) -> Result<Scenario, ValidationError> {
        let s = self.agents.len();
        if s == 0 {
            return Err(invalid("scenario has no agents"));
        }
        let mut index = BTreeMap::new();
        for (k, a) in self.agents.iter().enumerate() {
            if index.insert(a.id, k).is_some() {
                return Err(invalid(format!("duplicate agent id {}", a.id)));
            }
            if a.u0.is_some() && a.mu0.is_some() {
                return Err(invalid(format!("agent {} gives both u0 and mu0", a.id)));
            }
            let finite = a.g0.iter().all(|v| v.is_finite())
                && a.u0.iter().flatten().all(|v| v.is_finite())
                && a.mu0.iter().flatten().all(|v| v.is_finite())
                && a.g_t.iter().flatten().all(|v| v.is_finite());
            if !finite {
                return Err(invalid(format!("agent {} has non-finite data", a.id)));
            }
        }
        let lookup = |id: u32| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| invalid(format!("unknown agent id {id}")))
        };

        let mut edges = Vec::new();
        for [a, b] in &self.graph {
            if a == b {
                return Err(invalid(format!("self-loop on agent {a}")));
            }
            edges.push((lookup(*a)?, lookup(*b)?));
        }
        let graph = InteractionGraph::from_edges(s, &edges)?;
        if !graph.is_connected() {
            return Err(invalid("graph not connected"));
        }

        let r_bar = self.r_bar.unwrap_or(DEFAULT_R_BAR);
        let mut params = PotentialParams::free(s, r_bar);
        for (i, j) in graph.edges() {
            params.sigma_pair[i][j] = DEFAULT_SIGMA;
            params.sigma_pair[j][i] = DEFAULT_SIGMA;
        }
        let mut seen: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (key, &w) in &self.sigma_pair {
            let (a, b) = key
                .split_once('-')
                .and_then(|(a, b)| Some((a.trim().parse::<u32>().ok()?, b.trim().parse::<u32>().ok()?)))
                .ok_or_else(|| invalid(format!("sigma_pair key '{key}' is not of the form 'i-j'")))?;
            let (i, j) = (lookup(a)?, lookup(b)?);
            if !graph.has_edge(i, j) {
                return Err(invalid(format!("sigma_pair given for non-edge {a}-{b}")));
            }
            let unordered = (i.min(j), i.max(j));
            if let Some(prev) = seen.insert(unordered, w) {
                if prev != w {
                    return Err(invalid(format!("sigma_pair not symmetric for agents {a},{b}")));
                }
            }
            params.sigma_pair[i][j] = w;
            params.sigma_pair[j][i] = w;
        }
        params.sigma_obs = vec![DEFAULT_SIGMA; s];
        for (key, &w) in &self.sigma_obs {
            let id: u32 = key
                .trim()
                .parse()
                .map_err(|_| invalid(format!("sigma_obs key '{key}' is not an agent id")))?;
            params.sigma_obs[lookup(id)?] = w;
        }
        params.validate()?;

        if let Some(ob) = &self.obstacle {
            if ob.center != [0.0, 0.0] || ob.radius != 1.0 {
                return Err(invalid("obstacle must be the unit disk centred at the origin"));
            }
        }

        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid(format!("dt must be positive, got {}", self.dt)));
        }
        let (horizon, n_steps) = match (self.horizon, self.n_steps) {
            (Some(t), Some(n)) => {
                if (self.dt * n as f64 - t).abs() > STEP_MATCH_TOL {
                    return Err(invalid(format!(
                        "dt * n_steps = {} does not match horizon_T = {t}",
                        self.dt * n as f64
                    )));
                }
                (t, n)
            }
            (Some(t), None) => {
                let n = (t / self.dt).round() as usize;
                if (self.dt * n as f64 - t).abs() > STEP_MATCH_TOL {
                    return Err(invalid(format!("horizon_T = {t} is not a multiple of dt = {}", self.dt)));
                }
                (t, n)
            }
            (None, Some(n)) => (self.dt * n as f64, n),
            (None, None) => return Err(invalid("one of horizon_T or n_steps is required")),
        };
        if horizon.is_nan() || horizon <= 0.0 {
            return Err(invalid("horizon_T must be positive"));
        }

        let mode: Mode = self.mode.as_deref().unwrap_or("first_principles").parse()?;
        let integrator: Integrator = self.integrator.as_deref().unwrap_or("rk4").parse()?;
        let mut dynamics = DynOptions::new(mode, integrator, self.dt);
        if let Some(v) = &self.pair_gradient {
            dynamics.pair_gradient = match v.as_str() {
                "printed" => PairGradient::Printed,
                "rotated" => PairGradient::Rotated,
                other => return Err(invalid(format!("unknown pair_gradient '{other}'"))),
            };
        }
        if let Some(k) = self.sample_every {
            dynamics.sample_every = k;
        }
        let mut controls = ControlModel::unicycle();
        if let Some(e0) = self.drift_e0 {
            controls.drift = Twist::from_array(e0);
        }
        if let Some(dims) = &self.control_dims {
            let mut act = [false; 3];
            for &d in dims {
                if !(1..=3).contains(&d) {
                    return Err(invalid(format!("control_dims entry {d} is not in 1..=3")));
                }
                act[d - 1] = true;
            }
            controls.actuated = act;
        }
        dynamics.controls = controls;
        dynamics.validate()?;

        Ok(Scenario {
            ids: self.agents.iter().map(|a| a.id).collect(),
            g0: self.agents.iter().map(|a| pose(a.g0)).collect(),
            u0: self.agents.iter().map(|a| a.u0).collect(),
            mu0: self.agents.iter().map(|a| a.mu0.map(Momentum::from_array)).collect(),
            g_t: self.agents.iter().map(|a| a.g_t.map(pose)).collect(),
            graph,
            params,
            horizon,
            n_steps,
            dynamics,
        })
    }
}

fn pose(v: [f64; 3]) -> Pose2 {
    Pose2::new(v[0], v[1], v[2])
}

impl Scenario {
    pub fn agents(&self) -> usize {
        self.ids.len()
    }

    /// Agents must start strictly apart and strictly outside the obstacle clearance.
    pub fn check_feasibility(&self) -> Result<(), ValidationError> {
        let r = self.params.r_bar;
        let mut problems = Vec::new();
        for i in 0..self.agents() {
            for j in i + 1..self.agents() {
                let (a, b) = (&self.g0[i], &self.g0[j]);
                if (a.x - b.x).hypot(a.y - b.y) <= 2.0 * r {
                    problems.push(format!("agents {},{} initially in contact", self.ids[i], self.ids[j]));
                }
            }
        }
        for (i, g) in self.g0.iter().enumerate() {
            if g.x * g.x + g.y * g.y <= (r + 1.0).powi(2) {
                problems.push(format!("agent {} initially inside obstacle clearance", self.ids[i]));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(invalid(problems.join("; ")))
        }
    }

    /// Initial costates for an initial-value run: exactly one of `u0`/`mu0` per agent.
    pub fn initial_costates(&self) -> Result<Vec<Momentum>, ValidationError> {
        (0..self.agents())
            .map(|i| match (self.u0[i], self.mu0[i]) {
                (Some(u), None) => Ok(crate::bvp::costates_from_velocities(&[u], &self.dynamics)[0]),
                (None, Some(m)) => Ok(m),
                _ => Err(invalid(format!(
                    "agent {} needs exactly one of u0 or mu0 to simulate",
                    self.ids[i]
                ))),
            })
            .collect()
    }

    pub fn initial_state(&self) -> Result<SystemState, ValidationError> {
        Ok(SystemState::new(&self.g0, &self.initial_costates()?, &self.params.alpha0))
    }

    /// Shooting guess: given costates or velocities, zero otherwise.
    pub fn shooting_guess(&self) -> Vec<Momentum> {
        (0..self.agents())
            .map(|i| match (self.u0[i], self.mu0[i]) {
                (_, Some(m)) => m,
                (Some(u), None) => crate::bvp::costates_from_velocities(&[u], &self.dynamics)[0],
                (None, None) => Momentum::zero(),
            })
            .collect()
    }

    pub fn boundary(&self) -> Result<BoundaryData, ValidationError> {
        let g_t = self
            .g_t
            .iter()
            .zip(&self.ids)
            .map(|(g, id)| g.ok_or_else(|| invalid(format!("agent {id} has no target gT"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BoundaryData {
            g0: self.g0.clone(),
            g_t,
            horizon: self.horizon,
        })
    }

    /// Ids that occur in the graph, for reporting.
    pub fn edge_ids(&self) -> BTreeSet<(u32, u32)> {
        self.graph
            .edges()
            .into_iter()
            .map(|(i, j)| (self.ids[i], self.ids[j]))
            .collect()
    }
}

/// Parses and validates a scenario, including initial feasibility.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let file = read_scenario_file(path)?;
    let sc = file.build()?;
    sc.check_feasibility()?;
    Ok(sc)
}

/// Parses a scenario file without validating it.
pub fn read_scenario_file(path: impl AsRef<Path>) -> Result<ScenarioFile, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioFile::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> &'static str {
        r#"{"agents": [{"id": 1, "g0": [0.0, 4.0, 0.0], "u0": [0.0, 0.5]}],
            "sigma_obs": {"1": 0.0}, "dt": 0.01, "horizon_T": 1.0}"#
    }

    #[test]
    fn minimal_file_gets_defaults() {
        let sc = ScenarioFile::parse(minimal()).unwrap().build().unwrap();
        sc.check_feasibility().unwrap();
        assert_eq!(sc.dynamics.mode, Mode::FirstPrinciples);
        assert_eq!(sc.dynamics.integrator, Integrator::Rk4);
        assert_eq!(sc.params.sigma_obs, vec![0.0]);
        assert_eq!(sc.params.r_bar, 1.0);
        assert_eq!(sc.n_steps, 100);
        assert_eq!(sc.initial_costates().unwrap(), vec![Momentum::new(0.0, 0.5, 0.0)]);
    }

    #[test]
    fn asymmetric_pair_weights_rejected() {
        let text = r#"{"agents": [{"id": 1, "g0": [0, 5, 0]}, {"id": 2, "g0": [0, 9, 0]}],
            "graph": [[1, 2]], "sigma_pair": {"1-2": 1.0, "2-1": 2.0}, "dt": 0.1, "n_steps": 3}"#;
        let err = ScenarioFile::parse(text).unwrap().build().unwrap_err();
        assert!(err.0.contains("not symmetric"), "{err}");
    }

    #[test]
    fn disconnected_graph_rejected() {
        let text = r#"{"agents": [{"id": 1, "g0": [0, 5, 0]}, {"id": 2, "g0": [0, 9, 0]}],
            "dt": 0.1, "n_steps": 3}"#;
        let err = ScenarioFile::parse(text).unwrap().build().unwrap_err();
        assert_eq!(err.0, "graph not connected");
    }

    #[test]
    fn contact_and_clearance_reported() {
        let text = r#"{"agents": [{"id": 1, "g0": [0, 5, 0]}, {"id": 2, "g0": [0, 5, 1.5]},
            {"id": 3, "g0": [0, 1, 1]}],
            "graph": [[1, 2], [2, 3]], "dt": 0.1, "n_steps": 3}"#;
        let sc = ScenarioFile::parse(text).unwrap().build().unwrap();
        let err = sc.check_feasibility().unwrap_err();
        assert!(err.0.contains("agents 1,2 initially in contact"), "{err}");
        assert!(err.0.contains("agent 3 initially inside obstacle clearance"), "{err}");
    }

    #[test]
    fn step_count_must_match_horizon() {
        let text = r#"{"agents": [{"id": 1, "g0": [0, 5, 0]}], "dt": 0.1, "n_steps": 3, "horizon_T": 0.5}"#;
        assert!(ScenarioFile::parse(text).unwrap().build().is_err());
    }

    #[test]
    fn parse_error_has_line() {
        let err = ScenarioFile::parse("{\n  \"agents\": [\n  oops\n]}").unwrap_err();
        match err {
            ScenarioError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"agents": [{"id": 1, "g0": [0, 5, 0]}], "dt": 0.1, "n_steps": 3, "sigma": 2}"#;
        assert!(matches!(ScenarioFile::parse(text), Err(ScenarioError::Parse { .. })));
    }

    #[test]
    fn both_u0_and_mu0_rejected() {
        let text = r#"{"agents": [{"id": 1, "g0": [0, 5, 0], "u0": [1, 1], "mu0": [0, 0, 0]}],
            "dt": 0.1, "n_steps": 3}"#;
        assert!(ScenarioFile::parse(text).unwrap().build().is_err());
    }

    #[test]
    fn simulate_needs_initial_data() {
        let text = r#"{"agents": [{"id": 1, "g0": [0, 5, 0]}], "dt": 0.1, "n_steps": 3}"#;
        let sc = ScenarioFile::parse(text).unwrap().build().unwrap();
        assert!(sc.initial_costates().is_err());
        assert!(sc.boundary().is_err());
        assert_eq!(sc.shooting_guess(), vec![Momentum::zero()]);
    }

    #[test]
    fn obstacle_is_fixed() {
        let text = r#"{"agents": [{"id": 1, "g0": [0, 5, 0]}], "dt": 0.1, "n_steps": 3,
            "obstacle": {"center": [1, 0], "radius": 1}}"#;
        assert!(ScenarioFile::parse(text).unwrap().build().is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = ScenarioFile::parse(minimal()).unwrap();
        assert_eq!(ScenarioFile::parse(&f.to_json()).unwrap(), f);
    }
}
