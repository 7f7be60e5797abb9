use liepoisson::bvp::{residual, solve_shooting, BoundaryData, ShootOptions};
use liepoisson::record::TrajectoryTable;
use liepoisson::{
    integrate, DynOptions, Integrator, InteractionGraph, Mode, Momentum, Pose2, PotentialParams,
    SystemState, Twist,
};
use proptest::prelude::*;
use std::f64::consts::TAU;

fn pose() -> impl Strategy<Value = Pose2> {
    (-3.1f64..3.1, -5.0f64..5.0, -5.0f64..5.0).prop_map(|(t, x, y)| Pose2::new(t, x, y))
}

fn costate() -> impl Strategy<Value = Momentum> {
    (-0.5f64..0.5, -0.5f64..0.5, -0.3f64..0.3).prop_map(|(a, b, c)| Momentum::new(a, b, c))
}

/// Two agents far from each other and from the obstacle.
fn separated_pair() -> impl Strategy<Value = [Pose2; 2]> {
    (-3.1f64..3.1, -3.1f64..3.1, 0.0..TAU, 0.0..TAU).prop_map(|(t1, t2, p1, p2)| {
        [
            Pose2::new(t1, 7.0 * p1.cos(), 7.0 * p1.sin()),
            Pose2::new(t2, 3.0 * p2.cos() + 16.0, 3.0 * p2.sin()),
        ]
    })
}

fn rk4(dt: f64) -> DynOptions {
    DynOptions::new(Mode::FirstPrinciples, Integrator::Rk4, dt)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn residual_is_left_invariant(
        g in prop::collection::vec(pose(), 2),
        target in prop::collection::vec(pose(), 2),
        mu in prop::collection::vec(costate(), 2),
        h in pose(),
    ) {
        prop_assume!((g[0].x - g[1].x).hypot(g[0].y - g[1].y) > 3.0);
        let mut params = PotentialParams::free(2, 1.0);
        params.sigma_pair = vec![vec![0.0, 0.1], vec![0.1, 0.0]];
        let graph = InteractionGraph::complete(2);
        let opts = ShootOptions::new(rk4(0.02));
        let a = BoundaryData { g0: g.clone(), g_t: target.clone(), horizon: 1.0 };
        let b = BoundaryData {
            g0: g.iter().map(|p| h.compose(p)).collect(),
            g_t: target.iter().map(|p| h.compose(p)).collect(),
            horizon: 1.0,
        };
        let (ra, rb) = match (residual(&mu, &a, &params, &graph, &opts), residual(&mu, &b, &params, &graph, &opts)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => return Ok(()),
        };
        for (x, y) in ra.iter().zip(&rb) {
            prop_assert!((x - y).abs() <= 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn alpha_tracks_pose_in_both_modes(g in separated_pair(), mu in prop::collection::vec(costate(), 2)) {
        let params = PotentialParams::uniform(2, &[(0, 1)], 0.2, 0.2, 1.0);
        let graph = InteractionGraph::complete(2);
        for mode in [Mode::PaperPrinted, Mode::FirstPrinciples] {
            let opts = DynOptions::new(mode, Integrator::Rk4, 0.01).with_sample_every(10);
            let init = SystemState::new(&g, &mu, &Twist::E1);
            let traj = integrate(&init, &params, &graph, &opts, 200).unwrap();
            for s in &traj.samples {
                for a in &s.agents {
                    let expect = a.g.adjoint_inv(&Twist::E1);
                    let err = (a.alpha - expect).coord_norm();
                    prop_assert!(err <= 1e-6, "{mode:?}: {err}");
                }
            }
        }
    }

    #[test]
    fn energy_is_conserved_from_random_starts(g in separated_pair(), mu in prop::collection::vec(costate(), 2)) {
        let params = PotentialParams::uniform(2, &[(0, 1)], 0.3, 0.3, 1.0);
        let graph = InteractionGraph::complete(2);
        let init = SystemState::new(&g, &mu, &Twist::E1);
        let traj = integrate(&init, &params, &graph, &rk4(0.01), 300).unwrap();
        prop_assert!(traj.relative_energy_drift() <= 1e-7, "{}", traj.relative_energy_drift());
    }

    #[test]
    fn trajectory_csv_round_trip(g in separated_pair(), mu in prop::collection::vec(costate(), 2)) {
        let params = PotentialParams::uniform(2, &[(0, 1)], 0.3, 0.3, 1.0);
        let graph = InteractionGraph::complete(2);
        let init = SystemState::new(&g, &mu, &Twist::E1);
        let traj = integrate(&init, &params, &graph, &rk4(0.05), 20).unwrap();
        let table = TrajectoryTable::from_trajectory(&[4, 9], &traj);
        let mut buf = Vec::new();
        table.write(&mut buf).unwrap();
        prop_assert_eq!(TrajectoryTable::read(&buf[..]).unwrap(), table);
    }
}

#[test]
fn shooting_is_deterministic() {
    let boundary = BoundaryData {
        g0: vec![Pose2::new(0.0, -6.0, 2.0), Pose2::new(0.5, 6.0, 2.0)],
        g_t: vec![Pose2::new(0.3, -4.0, 2.5), Pose2::new(0.2, 4.5, 3.0)],
        horizon: 2.0,
    };
    let params = PotentialParams::uniform(2, &[(0, 1)], 0.2, 0.2, 1.0);
    let graph = InteractionGraph::complete(2);
    let opts = ShootOptions::new(rk4(0.01));
    let guess = vec![Momentum::zero(); 2];
    let a = solve_shooting(&guess, &boundary, &params, &graph, &opts).unwrap();
    let b = solve_shooting(&guess, &boundary, &params, &graph, &opts).unwrap();
    let bits = |r: &liepoisson::bvp::ShootReport| {
        r.log
            .iter()
            .map(|l| (l.residual_norm.to_bits(), l.damping.to_bits()))
            .collect::<Vec<_>>()
    };
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(a.mu0, b.mu0);
    assert!(a.converged);
}
