//! Symmetry-reduced extremal flows for multi-agent unicycle control on SE(2).
//!
//! * [`lie_se2`]: group kernel (composition, exp/log, adjoint and coadjoint actions).
//! * [`potentials`]: running cost, collision and obstacle barriers, body-frame gradients.
//! * [`dynamics`]: control law, reduced Hamiltonian, Lie-Poisson vector field, integrators.
//! * [`bvp`]: single shooting on the initial costates.
//! * [`scenario`], [`record`], [`svg`], [`check`], [`cli`]: file formats and command-line drivers.

pub mod bvp;
pub mod check;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod lie_se2;
pub mod potentials;
pub mod record;
pub mod scenario;
pub mod svg;

pub use dynamics::{
    hamiltonian, integrate, pmp_controls, rhs, step, AgentState, ControlModel, DynOptions,
    Integrator, Mode, SystemState, Trajectory,
};
pub use error::{PoleError, PoleKind, ValidationError};
pub use graph::InteractionGraph;
pub use lie_se2::{Momentum, Pose2, Twist};
pub use potentials::{PairGradient, PotentialParams};
