use std::f64::consts::FRAC_PI_4;

use liepoisson::dynamics::{Integrator, Mode};
use liepoisson::scenario::{load_scenario, read_scenario_file, ScenarioError};
use liepoisson::Momentum;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn paper_fixture_matches_published_data() {
    let file = read_scenario_file(fixture("paper_three_unicycles.json")).unwrap();
    let sc = file.build().unwrap();
    assert_eq!(sc.ids, vec![1, 2, 3]);

    let g0: Vec<[f64; 3]> = sc.g0.iter().map(|g| g.to_array()).collect();
    assert_eq!(g0, vec![[0.0, -1.0, -5.0], [FRAC_PI_4, -1.0, -7.0], [0.0, -1.0, 0.0]]);
    // First column of the published rotation block for agent 2.
    let m = sc.g0[1].to_matrix();
    assert!((m[(0, 0)] - 2f64.sqrt() / 2.0).abs() < 1e-15);
    assert!((m[(1, 0)] - 2f64.sqrt() / 2.0).abs() < 1e-15);

    assert_eq!(sc.u0, vec![Some([1.0, 0.6]), Some([1.0, 0.6]), Some([1.5, 2.0])]);
    assert_eq!(sc.dynamics.dt, 0.0001);
    assert_eq!(sc.n_steps, 50000);
    assert_eq!(sc.horizon, 5.0);
    assert_eq!(sc.dynamics.mode, Mode::PaperPrinted);
    assert_eq!(sc.dynamics.integrator, Integrator::Euler);
    assert_eq!(sc.graph.edges(), vec![(0, 1), (0, 2), (1, 2)]);
    assert_eq!(sc.params.r_bar, 1.0);
    assert!(sc.params.sigma_obs.iter().all(|&s| s == 1.0));

    // Initial velocities map to costates through the unicycle metric.
    assert_eq!(sc.initial_costates().unwrap()[2], Momentum::new(3.0, 2.0, 0.0));
}

#[test]
fn paper_fixture_fails_initial_feasibility() {
    match load_scenario(fixture("paper_three_unicycles.json")) {
        Err(ScenarioError::Validation(e)) => {
            assert!(e.0.contains("agents 1,2 initially in contact"), "{e}");
            assert!(e.0.contains("agent 3 initially inside obstacle clearance"), "{e}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn bundled_fixtures_load() {
    for name in [
        "two_agents.json",
        "two_agents_printed_gradient.json",
        "two_agents_shoot.json",
        "single_agent.json",
    ] {
        load_scenario(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    let shoot = load_scenario(fixture("two_agents_shoot.json")).unwrap();
    assert_eq!(shoot.boundary().unwrap().g_t.len(), 2);
}

#[test]
fn missing_file_is_io_error() {
    assert!(matches!(
        load_scenario(fixture("does_not_exist.json")),
        Err(ScenarioError::Io { .. })
    ));
}
