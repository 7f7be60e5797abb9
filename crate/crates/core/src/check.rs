//! Numerical invariant checks, run by `liepoisson check`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{casimir, integrate, Mode, Trajectory};
use crate::lie_se2::{coadjoint_star, Momentum, Pose2, Twist};
use crate::potentials::{
    fd_body_gradient, grad_pair_body, u_ext_with_offset, u_obs, u_pair, PairGradient, FD_STEP,
};
use crate::scenario::Scenario;

pub const KERNEL_TOL: f64 = 1e-10;
pub const INVARIANCE_TOL: f64 = 1e-12;
pub const FLOW_TOL: f64 = 1e-6;
pub const GRADIENT_TOL: f64 = 1e-6;
pub const CASIMIR_RATE_TOL: f64 = 1e-10;
const PROBE_STEPS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Fails by construction (e.g. the printed gradient away from theta = 0).
    ExpectedFail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedFail => "XFAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRow {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub tol: f64,
    pub detail: String,
}

impl CheckRow {
    fn measured(name: &str, value: f64, tol: f64) -> Self {
        let status = if value <= tol { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            status,
            value,
            tol,
            detail: String::new(),
        }
    }

    fn skipped(name: &str, why: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Skipped,
            value: f64::NAN,
            tol: f64::NAN,
            detail: why.into(),
        }
    }

    fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    fn expect_failure(mut self) -> Self {
        if self.status == Status::Fail {
            self.status = Status::ExpectedFail;
        }
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    pub fn failed(&self) -> bool {
        self.rows.iter().any(|r| r.status == Status::Fail)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<28} {:<6} {:>12} {:>10}  detail", "check", "status", "value", "tol")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<28} {:<6} {:>12.3e} {:>10.1e}  {}",
                r.name, r.status, r.value, r.tol, r.detail
            )?;
        }
        Ok(())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn max_abs_diff(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn random_pose(rng: &mut ChaCha8Rng, box_half: f64) -> Pose2 {
    Pose2::new(
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        rng.gen_range(-box_half..box_half),
        rng.gen_range(-box_half..box_half),
    )
}

fn random_twist(rng: &mut ChaCha8Rng, scale: f64) -> Twist {
    Twist::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

/// Pose whose centre lies outside the disk of radius `min_r`.
fn pose_outside(rng: &mut ChaCha8Rng, min_r: f64) -> Pose2 {
    loop {
        let g = random_pose(rng, 4.0 * min_r.max(1.0));
        if g.x.hypot(g.y) > 1.05 * min_r {
            return g;
        }
    }
}

/// Group and pairing identities on random samples.
pub fn kernel_checks(seed: u64, samples: usize) -> Vec<CheckRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut dual = 0.0f64;
    for k in 0..3 {
        for j in 0..3 {
            let tr = (Momentum::basis(k).to_matrix() * Twist::BASIS[j].to_matrix()).trace();
            dual = dual.max((tr - if k == j { 1.0 } else { 0.0 }).abs());
        }
    }

    let (mut adj, mut hom, mut explog) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let xi = random_twist(&mut rng, 3.0);
        let eta = random_twist(&mut rng, 3.0);
        let mu = Momentum::from_array(random_twist(&mut rng, 3.0).to_array());
        let lhs = coadjoint_star(&xi, &mu).pair(&eta);
        adj = adj.max(rel(lhs, mu.pair(&xi.bracket(&eta))));

        let g = random_pose(&mut rng, 5.0);
        let h = random_pose(&mut rng, 5.0);
        let a = g.compose(&h).adjoint(&xi).to_array();
        let b = g.adjoint(&h.adjoint(&xi)).to_array();
        hom = hom.max(max_abs_diff(a, b));

        let mut z = random_twist(&mut rng, 3.0);
        z.a = rng.gen_range(-3.0..3.0);
        explog = explog.max(max_abs_diff(Pose2::exp(&z).log().to_array(), z.to_array()));
    }
    vec![
        CheckRow::measured("dual basis", dual, KERNEL_TOL),
        CheckRow::measured("ad* adjointness", adj, KERNEL_TOL),
        CheckRow::measured("Ad homomorphism", hom, KERNEL_TOL),
        CheckRow::measured("log(exp(xi)) = xi", explog, KERNEL_TOL),
    ]
}

/// Symmetry and equivalence properties of the potentials for agents of radius `r_bar`.
pub fn potential_checks(seed: u64, samples: usize, r_bar: f64) -> Vec<CheckRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset = 2.0 + (r_bar + 1.0).powi(2);
    let (mut pair_inv, mut ext_eq, mut rot_inv) = (0.0f64, 0.0f64, 0.0f64);
    let mut witness = 0.0f64;
    for _ in 0..samples {
        let gi = random_pose(&mut rng, 8.0);
        let gj = loop {
            let c = random_pose(&mut rng, 8.0);
            if (c.x - gi.x).hypot(c.y - gi.y) > 2.1 * r_bar {
                break c;
            }
        };
        let h = random_pose(&mut rng, 5.0);
        if let (Ok(a), Ok(b)) = (
            u_pair(&gi, &gj, 1.0, r_bar),
            u_pair(&h.compose(&gi), &h.compose(&gj), 1.0, r_bar),
        ) {
            pair_inv = pair_inv.max(rel(a, b));
        }

        let g = pose_outside(&mut rng, r_bar + 1.0);
        let alpha = g.adjoint_inv(&Twist::E1);
        if let (Ok(a), Ok(b)) = (u_obs(&g, 1.0, r_bar), u_ext_with_offset(&alpha, 1.0, offset)) {
            ext_eq = ext_eq.max(rel(a, b));
        }
        let rot = Pose2::from_rotation(rng.gen_range(-3.0..3.0)).compose(&g);
        if let (Ok(a), Ok(b)) = (u_obs(&g, 1.0, r_bar), u_obs(&rot, 1.0, r_bar)) {
            rot_inv = rot_inv.max(rel(a, b));
        }
        let moved = Pose2::from_translation(2.0 * (r_bar + 1.0), 0.0).compose(&g);
        if let (Ok(a), Ok(b)) = (u_obs(&g, 1.0, r_bar), u_obs(&moved, 1.0, r_bar)) {
            witness = witness.max(rel(a, b));
        }
    }
    let witness_row = CheckRow {
        name: "U_obs not translation inv.".into(),
        status: if witness > 1e-6 { Status::Pass } else { Status::Fail },
        value: witness,
        tol: 1e-6,
        detail: "largest change under translation (must be > tol)".into(),
    };
    vec![
        CheckRow::measured("U_ij left invariance", pair_inv, INVARIANCE_TOL),
        CheckRow::measured("U_ext(Ad e1) = U_obs", ext_eq, INVARIANCE_TOL),
        CheckRow::measured("U_obs rotation invariance", rot_inv, INVARIANCE_TOL),
        witness_row,
    ]
}

/// Largest relative error of the analytic pair gradient against central
/// differences, over the scenario's interacting pairs at their initial poses.
fn pair_gradient_error(sc: &Scenario, variant: PairGradient) -> Option<f64> {
    let mut worst: Option<f64> = None;
    let both_ends = sc.graph.edges().into_iter().flat_map(|(i, j)| [(i, j), (j, i)]);
    for (i, j) in both_ends {
        let (gi, gj) = (&sc.g0[i], &sc.g0[j]);
        let sigma = sc.params.sigma_pair[i][j];
        if sigma == 0.0 {
            continue;
        }
        let analytic = grad_pair_body(gi, gj, sigma, sc.params.r_bar, variant).ok()?;
        let fd = fd_body_gradient(gi, FD_STEP, |g| u_pair(g, gj, sigma, sc.params.r_bar)).ok()?;
        let err = (analytic - fd).norm() / fd.norm().max(1e-300);
        worst = Some(worst.map_or(err, |w: f64| w.max(err)));
    }
    worst
}

fn probe(sc: &Scenario) -> Result<(Trajectory, f64), String> {
    let initial = sc.initial_state().map_err(|e| e.to_string())?;
    let steps = sc.n_steps.min(PROBE_STEPS);
    let opts = sc.dynamics.clone().with_sample_every(1);
    let traj = integrate(&initial, &sc.params, &sc.graph, &opts, steps).map_err(|e| e.to_string())?;
    Ok((traj, steps as f64 * sc.dynamics.dt))
}

/// Checks tied to one scenario: structure, gradients at the initial poses and
/// a short integration probe.
pub fn scenario_checks(sc: &Scenario) -> Vec<CheckRow> {
    let mut rows = Vec::new();
    rows.push(CheckRow {
        name: "graph connected".into(),
        status: if sc.graph.is_connected() { Status::Pass } else { Status::Fail },
        value: f64::NAN,
        tol: f64::NAN,
        detail: format!("{} agents, {} edges", sc.agents(), sc.graph.edges().len()),
    });
    rows.push(match sc.check_feasibility() {
        Ok(()) => CheckRow::measured("initial feasibility", 0.0, 0.0),
        Err(e) => CheckRow::measured("initial feasibility", 1.0, 0.0).with_detail(e.0),
    });

    for (name, variant) in [
        ("pair gradient (rotated)", PairGradient::Rotated),
        ("pair gradient (printed)", PairGradient::Printed),
    ] {
        rows.push(match pair_gradient_error(sc, variant) {
            None => CheckRow::skipped(name, "no weighted edges or singular pose"),
            Some(err) => {
                let row = CheckRow::measured(name, err, GRADIENT_TOL);
                if variant == PairGradient::Printed {
                    row.expect_failure().with_detail("matches only at theta = 0")
                } else {
                    row
                }
            }
        });
    }

    match probe(sc) {
        Err(why) => {
            for name in ["alpha reconstruction", "h conservation", "Casimir drift rate"] {
                rows.push(CheckRow::skipped(name, why.clone()));
            }
        }
        Ok((traj, span)) => {
            let alpha0 = sc.params.alpha0;
            let recon = traj
                .samples
                .iter()
                .flat_map(|s| s.agents.iter())
                .map(|a| max_abs_diff(a.alpha.to_array(), a.g.adjoint_inv(&alpha0).to_array()))
                .fold(0.0, f64::max);
            rows.push(CheckRow::measured("alpha reconstruction", recon, FLOW_TOL));

            let drift = CheckRow::measured("h conservation", traj.relative_energy_drift(), FLOW_TOL)
                .with_detail(format!("{} steps of {}", traj.steps_taken, sc.dynamics.integrator.name()));
            let non_conservative = sc.dynamics.mode == Mode::PaperPrinted
                || sc.dynamics.pair_gradient == PairGradient::Printed;
            rows.push(if non_conservative {
                drift.expect_failure()
            } else {
                drift
            });

            let unforced = sc.params.sigma_obs.iter().all(|&s| s == 0.0)
                && sc.params.sigma_pair.iter().flatten().all(|&s| s == 0.0);
            if unforced {
                let first = &traj.samples[0];
                let last = traj.last().expect("probe records samples");
                let worst = first
                    .agents
                    .iter()
                    .zip(&last.agents)
                    .map(|(a, b)| (casimir(&b.mu) - casimir(&a.mu)).abs())
                    .fold(0.0, f64::max);
                rows.push(CheckRow::measured("Casimir drift rate", worst / span, CASIMIR_RATE_TOL));
            } else {
                rows.push(CheckRow::skipped("Casimir drift rate", "potentials active"));
            }
        }
    }
    rows
}

pub fn run_checks(sc: &Scenario, seed: u64, samples: usize) -> CheckReport {
    let mut rows = kernel_checks(seed, samples);
    rows.extend(potential_checks(seed.wrapping_add(1), samples, sc.params.r_bar));
    rows.extend(scenario_checks(sc));
    CheckReport { rows }
}
