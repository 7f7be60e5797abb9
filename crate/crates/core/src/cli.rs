//! Command-line front end.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bvp::{solve_shooting, BvpError, ShootOptions, ShootReport};
use crate::check::run_checks;
use crate::dynamics::{integrate, DynError, Trajectory};
use crate::record::{write_trajectory, RecordError, TrajectoryTable};
use crate::scenario::{read_scenario_file, Scenario, ScenarioError};
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SINGULARITY: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;
pub const EXIT_PARSE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "liepoisson", version, about = "Multi-agent optimal control on SE(2)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the extremal flow from the scenario's initial data.
    Simulate {
        scenario: PathBuf,
        #[arg(long, default_value = "traj.csv")]
        out: PathBuf,
        /// paper_printed or first_principles
        #[arg(long)]
        mode: Option<String>,
        /// euler or rk4
        #[arg(long)]
        integrator: Option<String>,
        /// Record every k-th step.
        #[arg(long)]
        every: Option<usize>,
    },
    /// Solve the two-point boundary value problem by shooting on mu(0).
    Shoot {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        #[arg(long, default_value = "traj.csv")]
        out: PathBuf,
        /// Iteration log CSV.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run numerical invariant checks against a scenario.
    Check {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Render a trajectory CSV to SVG.
    Plot {
        traj: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        r_bar: f64,
    },
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        let code = match e {
            ScenarioError::Validation(_) => EXIT_VALIDATION,
            ScenarioError::Parse { .. } => EXIT_PARSE,
            ScenarioError::Io { .. } => EXIT_FAILURE,
        };
        Self::new(code, e.to_string())
    }
}

impl From<RecordError> for CliError {
    fn from(e: RecordError) -> Self {
        let code = match e {
            RecordError::Parse { .. } | RecordError::Csv(_) => EXIT_PARSE,
            RecordError::Io(_) => EXIT_FAILURE,
        };
        Self::new(code, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(EXIT_FAILURE, e.to_string())
    }
}

fn dyn_code(e: &DynError) -> i32 {
    match e {
        DynError::Singularity { .. } => EXIT_SINGULARITY,
        DynError::Invalid(_) => EXIT_VALIDATION,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::new(EXIT_FAILURE, format!("cannot write {}: {e}", path.display())))
}

fn load(path: &Path, mode: Option<String>, integrator: Option<String>, every: Option<usize>) -> Result<Scenario, CliError> {
    let mut file = read_scenario_file(path)?;
    if mode.is_some() {
        file.mode = mode;
    }
    if integrator.is_some() {
        file.integrator = integrator;
    }
    if every.is_some() {
        file.sample_every = every;
    }
    let sc = file.build().map_err(ScenarioError::from)?;
    sc.check_feasibility().map_err(ScenarioError::from)?;
    Ok(sc)
}

fn write_summary(out: &mut dyn Write, sc: &Scenario, traj: &Trajectory) -> std::io::Result<()> {
    writeln!(
        out,
        "agents: {}  steps: {}  dt: {}  mode: {}  integrator: {}",
        sc.agents(),
        traj.steps_taken,
        sc.dynamics.dt,
        sc.dynamics.mode.name(),
        sc.dynamics.integrator.name()
    )?;
    if let (Some(first), Some(last)) = (traj.samples.first(), traj.last()) {
        writeln!(out, "final poses at t = {}:", last.t)?;
        for (id, a) in sc.ids.iter().zip(&last.agents) {
            writeln!(
                out,
                "  agent {id}: theta = {:.9}, x = {:.9}, y = {:.9}",
                a.g.theta(),
                a.g.x,
                a.g.y
            )?;
        }
        writeln!(
            out,
            "h(0) = {:.12e}  h(end) = {:.12e}  max relative drift = {:.3e}",
            first.hamiltonian,
            last.hamiltonian,
            traj.relative_energy_drift()
        )?;
    }
    writeln!(out, "min pair distance = {:.9}", traj.min_pair_dist())?;
    writeln!(out, "min obstacle clearance = {:.9}", traj.min_obs_clearance())
}

fn simulate(
    path: &Path,
    out_path: &Path,
    mode: Option<String>,
    integrator: Option<String>,
    every: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let sc = load(path, mode, integrator, every)?;
    let initial = sc.initial_state().map_err(ScenarioError::from)?;
    match integrate(&initial, &sc.params, &sc.graph, &sc.dynamics, sc.n_steps) {
        Ok(traj) => {
            write_trajectory(create(out_path)?, &sc.ids, &traj, None)?;
            write_summary(out, &sc, &traj)?;
            writeln!(out, "wrote {}", out_path.display())?;
            Ok(())
        }
        Err(aborted) => {
            let note = aborted.error.to_string();
            write_trajectory(create(out_path)?, &sc.ids, &aborted.partial, Some(&note))?;
            write_summary(out, &sc, &aborted.partial)?;
            writeln!(out, "wrote partial trajectory {}", out_path.display())?;
            Err(CliError::new(dyn_code(&aborted.error), format!("aborted: {note}")))
        }
    }
}

fn write_shoot_report(out: &mut dyn Write, sc: &Scenario, rep: &ShootReport) -> std::io::Result<()> {
    writeln!(
        out,
        "converged: {}  iterations: {}  residual: {:.3e}",
        rep.converged, rep.iterations, rep.residual_norm
    )?;
    for (id, m) in sc.ids.iter().zip(&rep.mu0) {
        writeln!(out, "  agent {id}: mu0 = [{:.12e}, {:.12e}, {:.12e}]", m.m1, m.m2, m.m3)?;
    }
    Ok(())
}

fn write_iteration_log(path: &Path, rep: &ShootReport) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["iteration", "residual_norm", "damping"])
        .map_err(RecordError::from)?;
    for l in &rep.log {
        w.write_record([
            l.iteration.to_string(),
            crate::record::format_float(l.residual_norm),
            crate::record::format_float(l.damping),
        ])
        .map_err(RecordError::from)?;
    }
    w.flush()?;
    Ok(())
}

fn shoot(
    path: &Path,
    tol: f64,
    max_iter: usize,
    out_path: &Path,
    log_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let sc = load(path, None, None, None)?;
    let boundary = sc.boundary().map_err(ScenarioError::from)?;
    let mut opts = ShootOptions::new(sc.dynamics.clone());
    opts.tol = tol;
    opts.max_iter = max_iter;
    let emit = |rep: &ShootReport, out: &mut dyn Write| -> Result<(), CliError> {
        write_trajectory(create(out_path)?, &sc.ids, &rep.trajectory, None)?;
        if let Some(p) = log_path {
            write_iteration_log(p, rep)?;
        }
        write_shoot_report(out, &sc, rep)?;
        writeln!(out, "wrote {}", out_path.display())?;
        Ok(())
    };
    match solve_shooting(&sc.shooting_guess(), &boundary, &sc.params, &sc.graph, &opts) {
        Ok(rep) => emit(&rep, out),
        Err(BvpError::NonConvergence { best }) => {
            emit(&best, out)?;
            Err(CliError::new(
                EXIT_NONCONVERGENCE,
                format!("no convergence after {} iterations", best.iterations),
            ))
        }
        Err(e @ BvpError::Invalid(_)) => Err(CliError::new(EXIT_VALIDATION, e.to_string())),
        Err(e) => Err(CliError::new(EXIT_NONCONVERGENCE, e.to_string())),
    }
}

fn check(path: &Path, seed: u64, samples: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let file = read_scenario_file(path)?;
    let sc = file.build().map_err(ScenarioError::from)?;
    let report = run_checks(&sc, seed, samples);
    write!(out, "{report}")?;
    if report.failed() {
        Err(CliError::new(EXIT_FAILURE, "one or more checks failed"))
    } else {
        Ok(())
    }
}

fn plot(traj: &Path, out_path: &Path, r_bar: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let file = File::open(traj)
        .map_err(|e| CliError::new(EXIT_FAILURE, format!("cannot read {}: {e}", traj.display())))?;
    let table = TrajectoryTable::read(file)?;
    let doc = svg::render(&table, r_bar).map_err(|e| CliError::new(EXIT_PARSE, e.to_string()))?;
    let mut w = create(out_path)?;
    w.write_all(doc.as_bytes())?;
    w.flush()?;
    writeln!(out, "wrote {}", out_path.display())?;
    Ok(())
}

/// Runs one command, writing normal output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            scenario,
            out: out_path,
            mode,
            integrator,
            every,
        } => simulate(&scenario, &out_path, mode, integrator, every, out),
        Command::Shoot {
            scenario,
            tol,
            max_iter,
            out: out_path,
            log,
        } => shoot(&scenario, tol, max_iter, &out_path, log.as_deref(), out),
        Command::Check {
            scenario,
            seed,
            samples,
        } => check(&scenario, seed, samples, out),
        Command::Plot {
            traj,
            out: out_path,
            r_bar,
        } => plot(&traj, &out_path, r_bar, out),
    }
}

/// Entry point used by the binary; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
