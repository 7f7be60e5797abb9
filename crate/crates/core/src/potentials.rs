//! Running cost and barrier potentials for unicycle fleets, with their
//! body-frame gradients.
//!
//! The obstacle is the unit disk at the origin. Agents are disks of radius
//! `r_bar`, so a pair is in contact at centre distance `2 r_bar` and an agent
//! touches the obstacle at distance `r_bar + 1` from the origin.
//!
//! The obstacle barrier breaks the SE(2) symmetry: it only survives rotations
//! about the origin. Written through the advected parameter
//! `alpha = Ad_{g^-1} e1` it becomes the extended potential
//! `sigma / (2 (|alpha|^2 - c))`, invariant under the joint action on
//! `(g, alpha)`. With `alpha^1 = 1` one has `|alpha|^2 = 2 + x^2 + y^2`, so
//! `c = 2 + (r_bar + 1)^2`, which is 6 for unit agents.

use crate::error::{PoleError, PoleKind, ValidationError};
use crate::lie_se2::{coadjoint_star, cotangent_lift_position_gradient, Momentum, Pose2, Twist};

/// Evaluations whose barrier denominator drops to this value or below are
/// reported as singular.
pub const POLE_GUARD: f64 = 1e-9;

/// Step used by [`fd_body_gradient`] unless overridden.
pub const FD_STEP: f64 = 1e-5;

/// The extended-potential offset for unit agents.
pub const EXT_OFFSET_UNIT: f64 = 6.0;

/// Which form of the pair gradient to use.
///
/// `Printed` uses the world-frame position difference directly as the body
/// covector. `Rotated` applies the cotangent lift, rotating the world-frame
/// gradient into the body frame; the two coincide when the heading is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairGradient {
    Printed,
    Rotated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialParams {
    /// Symmetric pair weights, zero on the diagonal and on non-edges.
    pub sigma_pair: Vec<Vec<f64>>,
    /// Obstacle weights per agent. Zero switches the barrier off.
    pub sigma_obs: Vec<f64>,
    pub r_bar: f64,
    /// Reference parameter whose body-frame image is advected.
    pub alpha0: Twist,
    /// Desired distances for the combined potential, if used.
    pub d_des: Option<Vec<Vec<f64>>>,
}

impl PotentialParams {
    /// All weights zero.
    pub fn free(agents: usize, r_bar: f64) -> Self {
        Self {
            sigma_pair: vec![vec![0.0; agents]; agents],
            sigma_obs: vec![0.0; agents],
            r_bar,
            alpha0: Twist::E1,
            d_des: None,
        }
    }

    /// Uniform weights on the given edges and on every obstacle term.
    pub fn uniform(
        agents: usize,
        edges: &[(usize, usize)],
        sigma_pair: f64,
        sigma_obs: f64,
        r_bar: f64,
    ) -> Self {
        let mut p = Self::free(agents, r_bar);
        for &(i, j) in edges {
            p.sigma_pair[i][j] = sigma_pair;
            p.sigma_pair[j][i] = sigma_pair;
        }
        p.sigma_obs = vec![sigma_obs; agents];
        p
    }

    pub fn agents(&self) -> usize {
        self.sigma_obs.len()
    }

    /// `c` in `sigma / (2 (|alpha|^2 - c))`.
    pub fn ext_offset(&self) -> f64 {
        2.0 + (self.r_bar + 1.0).powi(2)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        let s = self.agents();
        if !(self.r_bar > 0.0 && self.r_bar.is_finite()) {
            return Err(ValidationError::new(format!("r_bar must be positive, got {}", self.r_bar)));
        }
        if self.sigma_pair.len() != s || self.sigma_pair.iter().any(|r| r.len() != s) {
            return Err(ValidationError::new("sigma_pair must be an s x s matrix"));
        }
        for i in 0..s {
            if self.sigma_pair[i][i] != 0.0 {
                return Err(ValidationError::new(format!("sigma_pair[{i}][{i}] must be zero")));
            }
            for j in 0..s {
                let w = self.sigma_pair[i][j];
                if !(w >= 0.0 && w.is_finite()) {
                    return Err(ValidationError::new(format!(
                        "sigma_pair[{i}][{j}] = {w} is not a nonnegative number"
                    )));
                }
                if w != self.sigma_pair[j][i] {
                    return Err(ValidationError::new(format!(
                        "sigma_pair is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        for (i, &w) in self.sigma_obs.iter().enumerate() {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(ValidationError::new(format!("sigma_obs[{i}] = {w} must be nonnegative")));
            }
        }
        if let Some(d) = &self.d_des {
            if d.len() != s || d.iter().any(|r| r.len() != s) {
                return Err(ValidationError::new("d_des must be an s x s matrix"));
            }
        }
        Ok(())
    }
}

fn guarded(kind: PoleKind, denominator: f64) -> Result<f64, PoleError> {
    if denominator <= POLE_GUARD || !denominator.is_finite() {
        Err(PoleError { kind, denominator })
    } else {
        Ok(denominator)
    }
}

/// Running cost `1/2 <u, u>` under the trace inner product.
pub fn cost(u: &Twist) -> f64 {
    0.5 * u.norm_sq()
}

/// Squared centre distance minus the contact distance squared.
fn pair_gap(gi: &Pose2, gj: &Pose2, r_bar: f64) -> f64 {
    let dx = gi.x - gj.x;
    let dy = gi.y - gj.y;
    dx * dx + dy * dy - 4.0 * r_bar * r_bar
}

pub fn u_pair(gi: &Pose2, gj: &Pose2, sigma: f64, r_bar: f64) -> Result<f64, PoleError> {
    if sigma == 0.0 {
        return Ok(0.0);
    }
    let d = guarded(PoleKind::Pair, pair_gap(gi, gj, r_bar))?;
    Ok(sigma / (2.0 * d))
}

pub fn u_obs(g: &Pose2, sigma: f64, r_bar: f64) -> Result<f64, PoleError> {
    if sigma == 0.0 {
        return Ok(0.0);
    }
    let d = guarded(PoleKind::Obstacle, g.x * g.x + g.y * g.y - (r_bar + 1.0).powi(2))?;
    Ok(sigma / (2.0 * d))
}

/// Extended obstacle potential for unit agents.
pub fn u_ext(alpha: &Twist, sigma: f64) -> Result<f64, PoleError> {
    u_ext_with_offset(alpha, sigma, EXT_OFFSET_UNIT)
}

pub fn u_ext_with_offset(alpha: &Twist, sigma: f64, offset: f64) -> Result<f64, PoleError> {
    if sigma == 0.0 {
        return Ok(0.0);
    }
    let d = guarded(PoleKind::Extended, alpha.norm_sq() - offset)?;
    Ok(sigma / (2.0 * d))
}

/// Body-frame gradient of `u_pair` with respect to `gi`.
pub fn grad_pair_body(
    gi: &Pose2,
    gj: &Pose2,
    sigma: f64,
    r_bar: f64,
    variant: PairGradient,
) -> Result<Momentum, PoleError> {
    if sigma == 0.0 {
        return Ok(Momentum::zero());
    }
    let d = guarded(PoleKind::Pair, pair_gap(gi, gj, r_bar))?;
    let scale = -sigma / (d * d);
    let (gx, gy) = (scale * (gi.x - gj.x), scale * (gi.y - gj.y));
    Ok(match variant {
        PairGradient::Printed => Momentum::new(0.0, gx, gy),
        PairGradient::Rotated => cotangent_lift_position_gradient(gi, gx, gy),
    })
}

/// Partial derivatives of the extended potential in the coordinates of `alpha`.
pub fn d_u_ext_d_alpha(alpha: &Twist, sigma: f64, offset: f64) -> Result<Momentum, PoleError> {
    if sigma == 0.0 {
        return Ok(Momentum::zero());
    }
    let d = guarded(PoleKind::Extended, alpha.norm_sq() - offset)?;
    let scale = -sigma / (d * d);
    Ok(Momentum::new(
        scale * 2.0 * alpha.a,
        scale * alpha.v1,
        scale * alpha.v2,
    ))
}

/// Momentum-map term `ad*_alpha (dU_ext/dalpha)` for unit agents.
pub fn grad_obs_ext(alpha: &Twist, sigma: f64) -> Result<Momentum, PoleError> {
    grad_obs_ext_with_offset(alpha, sigma, EXT_OFFSET_UNIT)
}

pub fn grad_obs_ext_with_offset(alpha: &Twist, sigma: f64, offset: f64) -> Result<Momentum, PoleError> {
    if sigma == 0.0 {
        return Ok(Momentum::zero());
    }
    let d = guarded(PoleKind::Extended, alpha.norm_sq() - offset)?;
    let scale = sigma * alpha.a / (d * d);
    Ok(Momentum::new(0.0, -scale * alpha.v2, scale * alpha.v1))
}

/// The same term assembled from the coadjoint action; kept as a cross-check of
/// the closed form above.
pub fn grad_obs_ext_coadjoint(alpha: &Twist, sigma: f64, offset: f64) -> Result<Momentum, PoleError> {
    Ok(coadjoint_star(alpha, &d_u_ext_d_alpha(alpha, sigma, offset)?))
}

/// Combined obstacle-and-formation potential
/// `sigma / (2 (x^2 + y^2 - (r_bar+1)^2) prod_j (|p_i - p_j|^2 - d_ij^2))`.
///
/// `neighbors` holds each neighbour pose with its desired distance.
pub fn u_combined(
    gi: &Pose2,
    neighbors: &[(Pose2, f64)],
    sigma: f64,
    r_bar: f64,
) -> Result<f64, PoleError> {
    let clearance = guarded(
        PoleKind::Combined,
        gi.x * gi.x + gi.y * gi.y - (r_bar + 1.0).powi(2),
    )?;
    let mut upsilon = 1.0;
    for (gj, d) in neighbors {
        let dx = gi.x - gj.x;
        let dy = gi.y - gj.y;
        upsilon *= guarded(PoleKind::Combined, dx * dx + dy * dy - d * d)?;
    }
    Ok(sigma / (2.0 * clearance * upsilon))
}

/// Body-frame gradient of [`u_combined`] by central differences.
pub fn grad_combined_fd(
    gi: &Pose2,
    neighbors: &[(Pose2, f64)],
    sigma: f64,
    r_bar: f64,
) -> Result<Momentum, PoleError> {
    fd_body_gradient(gi, FD_STEP, |g| u_combined(g, neighbors, sigma, r_bar))
}

/// Central-difference body-frame gradient of `f` at `g`, through the chart
/// `t -> g exp(t e_k)`.
pub fn fd_body_gradient<F>(g: &Pose2, step: f64, f: F) -> Result<Momentum, PoleError>
where
    F: Fn(&Pose2) -> Result<f64, PoleError>,
{
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let e = Twist::BASIS[k];
        let fwd = f(&g.compose(&Pose2::exp(&(step * e))))?;
        let bwd = f(&g.compose(&Pose2::exp(&(-step * e))))?;
        *slot = (fwd - bwd) / (2.0 * step);
    }
    Ok(Momentum::from_array(out))
}

/// Central-difference gradient of `f` in the coordinates of a twist.
pub fn fd_twist_gradient<F>(alpha: &Twist, step: f64, f: F) -> Result<Momentum, PoleError>
where
    F: Fn(&Twist) -> Result<f64, PoleError>,
{
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let e = Twist::BASIS[k];
        *slot = (f(&(*alpha + step * e))? - f(&(*alpha - step * e))?) / (2.0 * step);
    }
    Ok(Momentum::from_array(out))
}
