//! SE(2) and its Lie algebra.
//!
//! Coordinates follow the basis
//!
//! ```text
//! e1 = [0 -1 0; 1 0 0; 0 0 0]   (rotation)
//! e2 = [0  0 1; 0 0 0; 0 0 0]   (translation along x)
//! e3 = [0  0 0; 0 0 1; 0 0 0]   (translation along y)
//! ```
//!
//! with `[e1, e2] = e3`, `[e2, e3] = 0`, `[e3, e1] = e2`. Covectors use the dual
//! basis under the trace pairing `<alpha, xi> = tr(alpha xi)`, so a [`Momentum`]
//! pairs with a [`Twist`] coordinate by coordinate. The inner product on the
//! algebra is `tr(xi^T eta)`, which weights the rotational coordinate by two.
//!
//! Poses are kept as `(theta, x, y)` and only turned into matrices on request.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::Matrix3;

/// Below this rotation magnitude `exp`/`log` switch to their series limits.
pub const SMALL_ANGLE: f64 = 1e-8;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// An element of SE(2): heading plus planar position.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Pose2 {
    theta: f64,
    pub x: f64,
    pub y: f64,
}

impl Pose2 {
    pub fn new(theta: f64, x: f64, y: f64) -> Self {
        Self {
            theta: wrap_angle(theta),
            x,
            y,
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_translation(x: f64, y: f64) -> Self {
        Self { theta: 0.0, x, y }
    }

    pub fn from_rotation(theta: f64) -> Self {
        Self::new(theta, 0.0, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn position(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.theta, self.x, self.y]
    }

    /// Rotates a planar vector by the heading of this pose.
    pub fn rotate(&self, v: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.theta.sin_cos();
        [c * v[0] - s * v[1], s * v[0] + c * v[1]]
    }

    /// Rotates a planar vector by minus the heading (world frame to body frame).
    pub fn unrotate(&self, v: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.theta.sin_cos();
        [c * v[0] + s * v[1], -s * v[0] + c * v[1]]
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        let (s, c) = self.theta.sin_cos();
        Matrix3::new(c, -s, self.x, s, c, self.y, 0.0, 0.0, 1.0)
    }

    /// Reads a homogeneous matrix. The rotation block is assumed orthogonal; only
    /// its first column is used to recover the heading.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Self::new(m[(1, 0)].atan2(m[(0, 0)]), m[(0, 2)], m[(1, 2)])
    }

    pub fn compose(&self, other: &Pose2) -> Pose2 {
        let [dx, dy] = self.rotate(other.position());
        Pose2::new(self.theta + other.theta, self.x + dx, self.y + dy)
    }

    pub fn inverse(&self) -> Pose2 {
        let [x, y] = self.unrotate(self.position());
        Pose2::new(-self.theta, -x, -y)
    }

    /// `self^-1 * other`, the pose of `other` seen from `self`.
    pub fn between(&self, other: &Pose2) -> Pose2 {
        self.inverse().compose(other)
    }

    /// Group exponential of a twist (closed form).
    pub fn exp(xi: &Twist) -> Pose2 {
        let a = xi.a;
        let (x, y) = if a.abs() < SMALL_ANGLE {
            (xi.v1 - 0.5 * a * xi.v2, xi.v2 + 0.5 * a * xi.v1)
        } else {
            let s = a.sin();
            let omc = 2.0 * (0.5 * a).sin().powi(2);
            ((s * xi.v1 - omc * xi.v2) / a, (omc * xi.v1 + s * xi.v2) / a)
        };
        Pose2::new(a, x, y)
    }

    /// Group logarithm; the heading `pi` maps to the `+pi` branch.
    pub fn log(&self) -> Twist {
        let a = self.theta;
        let half = 0.5 * a;
        let diag = if a.abs() < SMALL_ANGLE {
            1.0 - a * a / 12.0
        } else {
            let (s, c) = half.sin_cos();
            half * c / s
        };
        Twist::new(
            a,
            diag * self.x + half * self.y,
            -half * self.x + diag * self.y,
        )
    }

    /// Adjoint action `Ad_g xi = g xi g^-1`.
    pub fn adjoint(&self, xi: &Twist) -> Twist {
        let [rx, ry] = self.rotate([xi.v1, xi.v2]);
        Twist::new(xi.a, rx + xi.a * self.y, ry - xi.a * self.x)
    }

    /// `Ad_{g^-1} xi`, which carries a world-fixed parameter into the body frame.
    pub fn adjoint_inv(&self, xi: &Twist) -> Twist {
        self.inverse().adjoint(xi)
    }
}

impl Mul for Pose2 {
    type Output = Pose2;
    fn mul(self, rhs: Pose2) -> Pose2 {
        self.compose(&rhs)
    }
}

impl fmt::Display for Pose2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(theta={}, x={}, y={})", self.theta, self.x, self.y)
    }
}

/// An element of se(2) in the basis `(e1, e2, e3)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Twist {
    pub a: f64,
    pub v1: f64,
    pub v2: f64,
}

impl Twist {
    pub const E1: Twist = Twist::new(1.0, 0.0, 0.0);
    pub const E2: Twist = Twist::new(0.0, 1.0, 0.0);
    pub const E3: Twist = Twist::new(0.0, 0.0, 1.0);
    pub const BASIS: [Twist; 3] = [Self::E1, Self::E2, Self::E3];

    pub const fn new(a: f64, v1: f64, v2: f64) -> Self {
        Self { a, v1, v2 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.a, self.v1, self.v2]
    }

    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            0.0, -self.a, self.v1, //
            self.a, 0.0, self.v2, //
            0.0, 0.0, 0.0,
        )
    }

    /// Inverse of [`Twist::to_matrix`] for matrices of that shape.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Self::new(m[(1, 0)], m[(0, 2)], m[(1, 2)])
    }

    /// Lie bracket `[self, other]`.
    pub fn bracket(&self, other: &Twist) -> Twist {
        Twist::new(
            0.0,
            -self.a * other.v2 + other.a * self.v2,
            self.a * other.v1 - other.a * self.v1,
        )
    }

    /// Trace inner product `tr(self^T other)`.
    pub fn inner(&self, other: &Twist) -> f64 {
        2.0 * self.a * other.a + self.v1 * other.v1 + self.v2 * other.v2
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    /// Euclidean norm of the coordinate vector (not the trace norm).
    pub fn coord_norm(&self) -> f64 {
        (self.a * self.a + self.v1 * self.v1 + self.v2 * self.v2).sqrt()
    }

    /// Metric weight of coordinate `k` in the trace inner product.
    pub fn metric_weight(k: usize) -> f64 {
        if k == 0 {
            2.0
        } else {
            1.0
        }
    }
}

impl Add for Twist {
    type Output = Twist;
    fn add(self, r: Twist) -> Twist {
        Twist::new(self.a + r.a, self.v1 + r.v1, self.v2 + r.v2)
    }
}

impl AddAssign for Twist {
    fn add_assign(&mut self, r: Twist) {
        *self = *self + r;
    }
}

impl Sub for Twist {
    type Output = Twist;
    fn sub(self, r: Twist) -> Twist {
        Twist::new(self.a - r.a, self.v1 - r.v1, self.v2 - r.v2)
    }
}

impl Neg for Twist {
    type Output = Twist;
    fn neg(self) -> Twist {
        Twist::new(-self.a, -self.v1, -self.v2)
    }
}

impl Mul<Twist> for f64 {
    type Output = Twist;
    fn mul(self, t: Twist) -> Twist {
        Twist::new(self * t.a, self * t.v1, self * t.v2)
    }
}

/// An element of se(2)* in the dual basis `(e^1, e^2, e^3)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Momentum {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

impl Momentum {
    pub const fn new(m1: f64, m2: f64, m3: f64) -> Self {
        Self { m1, m2, m3 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.m1, self.m2, self.m3]
    }

    /// Dual basis element `e^k`, `k` in `0..3`.
    pub fn basis(k: usize) -> Momentum {
        let mut v = [0.0; 3];
        v[k] = 1.0;
        Momentum::from_array(v)
    }

    /// Matrix representative under the trace pairing.
    pub fn to_matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            0.0,
            0.5 * self.m1,
            0.0,
            -0.5 * self.m1,
            0.0,
            0.0,
            self.m2,
            self.m3,
            0.0,
        )
    }

    pub fn pair(&self, xi: &Twist) -> f64 {
        self.m1 * xi.a + self.m2 * xi.v1 + self.m3 * xi.v2
    }

    pub fn norm(&self) -> f64 {
        (self.m1 * self.m1 + self.m2 * self.m2 + self.m3 * self.m3).sqrt()
    }
}

impl Add for Momentum {
    type Output = Momentum;
    fn add(self, r: Momentum) -> Momentum {
        Momentum::new(self.m1 + r.m1, self.m2 + r.m2, self.m3 + r.m3)
    }
}

impl AddAssign for Momentum {
    fn add_assign(&mut self, r: Momentum) {
        *self = *self + r;
    }
}

impl Sub for Momentum {
    type Output = Momentum;
    fn sub(self, r: Momentum) -> Momentum {
        Momentum::new(self.m1 - r.m1, self.m2 - r.m2, self.m3 - r.m3)
    }
}

impl Neg for Momentum {
    type Output = Momentum;
    fn neg(self) -> Momentum {
        Momentum::new(-self.m1, -self.m2, -self.m3)
    }
}

impl Mul<Momentum> for f64 {
    type Output = Momentum;
    fn mul(self, m: Momentum) -> Momentum {
        Momentum::new(self * m.m1, self * m.m2, self * m.m3)
    }
}

pub fn compose(g: &Pose2, h: &Pose2) -> Pose2 {
    g.compose(h)
}

pub fn inverse(g: &Pose2) -> Pose2 {
    g.inverse()
}

pub fn exp(xi: &Twist) -> Pose2 {
    Pose2::exp(xi)
}

pub fn log(g: &Pose2) -> Twist {
    g.log()
}

pub fn bracket(xi: &Twist, eta: &Twist) -> Twist {
    xi.bracket(eta)
}

pub fn pairing(mu: &Momentum, xi: &Twist) -> f64 {
    mu.pair(xi)
}

pub fn inner(xi: &Twist, eta: &Twist) -> f64 {
    xi.inner(eta)
}

pub fn norm_sq(xi: &Twist) -> f64 {
    xi.norm_sq()
}

pub fn adjoint(g: &Pose2, xi: &Twist) -> Twist {
    g.adjoint(xi)
}

/// `ad*_xi mu`, defined by `<ad*_xi mu, eta> = <mu, [xi, eta]>`.
pub fn coadjoint_star(xi: &Twist, mu: &Momentum) -> Momentum {
    Momentum::new(
        xi.v2 * mu.m2 - xi.v1 * mu.m3,
        xi.a * mu.m3,
        -xi.a * mu.m2,
    )
}

/// Pulls a world-frame position gradient back to the identity, `T*_e L_g (dU)`,
/// for a potential that does not depend on the heading.
pub fn cotangent_lift_position_gradient(g: &Pose2, du_dx: f64, du_dy: f64) -> Momentum {
    let [b1, b2] = g.unrotate([du_dx, du_dy]);
    Momentum::new(0.0, b1, b2)
}

/// Inverse differential of `exp` for `g = g0 exp(theta)`, `g^-1 g' = v`:
/// returns `theta'`, truncated after the second-order term. Used by the
/// Lie-group Runge-Kutta stages.
pub(crate) fn dexp_inv(theta: &Twist, v: &Twist) -> Twist {
    let t1 = theta.bracket(v);
    let t2 = theta.bracket(&t1);
    *v + 0.5 * t1 + (1.0 / 12.0) * t2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) {
        for k in 0..3 {
            assert_abs_diff_eq!(a[k], b[k], epsilon = tol);
        }
    }

    fn pose_from(m: &Matrix3<f64>) -> Pose2 {
        Pose2::from_matrix(m)
    }

    /// Truncated power series of the matrix exponential.
    fn series_exp(m: &Matrix3<f64>, terms: usize) -> Matrix3<f64> {
        let mut acc = Matrix3::identity();
        let mut term = Matrix3::identity();
        for k in 1..terms {
            term = term * m / k as f64;
            acc += term;
        }
        acc
    }

    #[test]
    fn wrap_keeps_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert_abs_diff_eq!(wrap_angle(-PI), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_angle(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_angle(7.0), 7.0 - 2.0 * PI, epsilon = 1e-15);
        let p = Pose2::new(5.0 * PI, 0.0, 0.0);
        assert_abs_diff_eq!(p.theta(), PI, epsilon = 1e-12);
    }

    #[test]
    fn compose_examples() {
        let r = Pose2::new(0.0, 1.0, 2.0) * Pose2::new(0.0, 3.0, 4.0);
        close(r.to_array(), [0.0, 4.0, 6.0], 0.0);
        let g = Pose2::new(0.7, -1.0, 5.0);
        assert_eq!(Pose2::identity() * g, g);
        let a = Pose2::new(PI / 2.0, 0.0, 0.0);
        let b = Pose2::new(0.0, 1.0, 0.0);
        let oracle = pose_from(&(a.to_matrix() * b.to_matrix()));
        close((a * b).to_array(), oracle.to_array(), 1e-15);
        close((a * b).to_array(), [PI / 2.0, 0.0, 1.0], 1e-15);
    }

    #[test]
    fn inverse_examples() {
        close(Pose2::new(0.4, 0.0, 0.0).inverse().to_array(), [-0.4, 0.0, 0.0], 0.0);
        close(Pose2::new(0.0, 2.0, -3.0).inverse().to_array(), [0.0, -2.0, 3.0], 0.0);
        let g = Pose2::new(PI / 3.0, 2.0, -1.0);
        close((g * g.inverse()).to_array(), [0.0; 3], 1e-12);
    }

    #[test]
    fn exp_examples() {
        assert_eq!(Pose2::exp(&Twist::zero()), Pose2::identity());
        close(Pose2::exp(&Twist::new(0.0, 1.0, 2.0)).to_array(), [0.0, 1.0, 2.0], 0.0);
        let xi = Twist::new(PI / 2.0, 1.0, 0.0);
        let oracle = pose_from(&series_exp(&xi.to_matrix(), 20));
        close(Pose2::exp(&xi).to_array(), oracle.to_array(), 1e-10);
        close(
            Pose2::exp(&xi).to_array(),
            [PI / 2.0, 2.0 / PI, 2.0 / PI],
            1e-15,
        );
    }

    #[test]
    fn exp_small_angle_branch_is_continuous() {
        for a in [1e-9, -3e-9, 2e-8, -1e-7] {
            let xi = Twist::new(a, 0.8, -1.3);
            let oracle = pose_from(&series_exp(&xi.to_matrix(), 20));
            close(Pose2::exp(&xi).to_array(), oracle.to_array(), 1e-14);
        }
    }

    #[test]
    fn log_examples() {
        assert_eq!(Pose2::identity().log(), Twist::zero());
        close(Pose2::new(0.0, 3.0, -4.0).log().to_array(), [0.0, 3.0, -4.0], 0.0);
        close(
            Pose2::new(PI / 2.0, 2.0 / PI, 2.0 / PI).log().to_array(),
            [PI / 2.0, 1.0, 0.0],
            1e-14,
        );
        let g = Pose2::new(PI, 1.0, 2.0);
        let xi = g.log();
        assert_eq!(xi.a, PI);
        close(Pose2::exp(&xi).to_array(), g.to_array(), 1e-10);
    }

    #[test]
    fn bracket_matches_structure_constants() {
        assert_eq!(Twist::E1.bracket(&Twist::E2), Twist::E3);
        assert_eq!(Twist::E2.bracket(&Twist::E3), Twist::zero());
        assert_eq!(Twist::E3.bracket(&Twist::E1), Twist::E2);
        let xi = Twist::new(1.0, 1.0, 0.0);
        let eta = Twist::new(0.0, 0.0, 1.0);
        let (x, e) = (xi.to_matrix(), eta.to_matrix());
        let oracle = Twist::from_matrix(&(x * e - e * x));
        assert_eq!(xi.bracket(&eta), oracle);
    }

    #[test]
    fn dual_basis_under_trace() {
        for k in 0..3 {
            for j in 0..3 {
                let tr = (Momentum::basis(k).to_matrix() * Twist::BASIS[j].to_matrix()).trace();
                assert_abs_diff_eq!(tr, if k == j { 1.0 } else { 0.0 }, epsilon = 1e-15);
                assert_eq!(
                    Momentum::basis(k).pair(&Twist::BASIS[j]),
                    if k == j { 1.0 } else { 0.0 }
                );
            }
        }
        assert_eq!(
            Momentum::new(1.0, 2.0, 3.0).pair(&Twist::new(4.0, 5.0, 6.0)),
            32.0
        );
        assert_eq!(Momentum::zero().pair(&Twist::new(1.0, -2.0, 9.0)), 0.0);
    }

    #[test]
    fn trace_inner_product() {
        let tr = |a: &Twist, b: &Twist| (a.to_matrix().transpose() * b.to_matrix()).trace();
        assert_eq!(Twist::E1.inner(&Twist::E1), 2.0);
        assert_eq!(tr(&Twist::E1, &Twist::E1), 2.0);
        assert_eq!(Twist::E2.inner(&Twist::E2), 1.0);
        assert_eq!(Twist::E1.inner(&Twist::E2), 0.0);
        assert_eq!(Twist::new(1.0, 1.0, 1.0).norm_sq(), 4.0);
        assert_eq!(Twist::zero().norm_sq(), 0.0);
    }

    #[test]
    fn adjoint_examples() {
        let xi = Twist::new(0.3, -1.0, 2.0);
        assert_eq!(Pose2::identity().adjoint(&xi), xi);
        let (th, x, y) = (0.9, 1.5, -2.5);
        let g = Pose2::new(th, x, y);
        close(
            g.adjoint_inv(&Twist::E1).to_array(),
            [1.0, x * th.sin() - y * th.cos(), x * th.cos() + y * th.sin()],
            1e-14,
        );
        let g = Pose2::new(PI / 2.0, 1.0, 0.0);
        let m = g.to_matrix();
        let oracle = Twist::from_matrix(&(m.try_inverse().unwrap() * Twist::E1.to_matrix() * m));
        close(g.adjoint_inv(&Twist::E1).to_array(), oracle.to_array(), 1e-15);
        close(oracle.to_array(), [1.0, 1.0, 0.0], 1e-15);
    }

    #[test]
    fn coadjoint_examples() {
        let mu = Momentum::new(1.5, -2.0, 0.25);
        assert_eq!(
            coadjoint_star(&Twist::E1, &mu),
            Momentum::new(0.0, mu.m3, -mu.m2)
        );
        assert_eq!(coadjoint_star(&Twist::E2, &mu), Momentum::new(-mu.m3, 0.0, 0.0));
        assert_eq!(coadjoint_star(&Twist::zero(), &mu), Momentum::zero());
    }

    #[test]
    fn cotangent_lift_examples() {
        let g = Pose2::new(0.0, 3.0, 1.0);
        assert_eq!(
            cotangent_lift_position_gradient(&g, 0.5, -1.5),
            Momentum::new(0.0, 0.5, -1.5)
        );
        let g = Pose2::new(PI / 2.0, 0.0, 0.0);
        close(
            cotangent_lift_position_gradient(&g, 1.0, 0.0).to_array(),
            [0.0, 0.0, -1.0],
            1e-15,
        );
        assert_eq!(
            cotangent_lift_position_gradient(&g, 0.0, 0.0).to_array(),
            [0.0; 3]
        );
    }

    #[test]
    fn cotangent_lift_matches_chart_derivative() {
        let u = |p: &Pose2| (0.3 * p.x - 1.2).powi(2) + (p.x * p.y).sin() + 0.1 * p.y.powi(3);
        let g = Pose2::new(2.1, 0.7, -0.4);
        let h = 1e-5;
        let ux = 0.6 * (0.3 * g.x - 1.2) + g.y * (g.x * g.y).cos();
        let uy = g.x * (g.x * g.y).cos() + 0.3 * g.y * g.y;
        let lifted = cotangent_lift_position_gradient(&g, ux, uy).to_array();
        for (k, (e, l)) in Twist::BASIS.iter().zip(lifted).enumerate().skip(1) {
            let fwd = g * Pose2::exp(&(h * *e));
            let bwd = g * Pose2::exp(&(-h * *e));
            let fd = (u(&fwd) - u(&bwd)) / (2.0 * h);
            assert!(((l - fd) / fd).abs() <= 1e-6, "k={k} {l} {fd}");
        }
    }

    #[test]
    fn matrix_round_trip() {
        let g = Pose2::new(-2.2, 4.0, 0.5);
        let m = g.to_matrix();
        let r = m.fixed_view::<2, 2>(0, 0);
        assert_abs_diff_eq!((r.transpose() * r - nalgebra::Matrix2::identity()).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-12);
        close(Pose2::from_matrix(&m).to_array(), g.to_array(), 1e-12);
    }

    fn pose() -> impl Strategy<Value = Pose2> {
        (-PI..PI, -10.0..10.0f64, -10.0..10.0f64).prop_map(|(t, x, y)| Pose2::new(t, x, y))
    }

    fn twist(r: f64) -> impl Strategy<Value = Twist> {
        (-r..r, -r..r, -r..r).prop_map(|(a, b, c)| Twist::new(a, b, c))
    }

    proptest! {
        #[test]
        fn compose_matches_matrix_product(g in pose(), h in pose()) {
            let oracle = Pose2::from_matrix(&(g.to_matrix() * h.to_matrix()));
            let got = g * h;
            prop_assert!((wrap_angle(got.theta() - oracle.theta())).abs() < 1e-12);
            prop_assert!((got.x - oracle.x).abs() < 1e-12 && (got.y - oracle.y).abs() < 1e-12);
        }

        #[test]
        fn adjoint_is_conjugation(g in pose(), xi in twist(3.0)) {
            let m = g.to_matrix();
            let oracle = Twist::from_matrix(&(m * xi.to_matrix() * m.try_inverse().unwrap()));
            let got = g.adjoint(&xi);
            prop_assert!((got - oracle).coord_norm() < 1e-10);
        }

        #[test]
        fn exp_log_round_trip(xi in twist(3.1)) {
            let back = Pose2::exp(&xi).log();
            prop_assert!((back - xi).coord_norm() < 1e-10);
        }

        #[test]
        fn pairing_is_trace(m in twist(5.0), xi in twist(5.0)) {
            let mu = Momentum::new(m.a, m.v1, m.v2);
            let tr = (mu.to_matrix() * xi.to_matrix()).trace();
            prop_assert!((tr - mu.pair(&xi)).abs() < 1e-12);
        }
    }
}
