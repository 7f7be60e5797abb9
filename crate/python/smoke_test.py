"""Smoke test for the liepoisson Python module.

Build and install first:  pip install maturin && maturin develop -m crates/py/Cargo.toml
"""
import math
import os

import liepoisson as lp

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "crates", "core", "fixtures")


def close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def main():
    xi = lp.Twist(math.pi / 2, 1.0, 0.0)
    g = lp.exp(xi)
    assert close(g.as_tuple(), (math.pi / 2, 2 / math.pi, 2 / math.pi))
    assert close(lp.log(g).as_tuple(), xi.as_tuple())

    h = lp.Pose2(0.3, 1.0, -2.0)
    assert close((h * h.inverse()).as_tuple(), (0.0, 0.0, 0.0))

    mu = lp.Momentum(1.0, 2.0, 3.0)
    eta = lp.Twist(0.1, -0.4, 0.7)
    lhs = lp.coadjoint_star(xi, mu).pair(eta)
    rhs = mu.pair(xi.bracket(eta))
    assert abs(lhs - rhs) < 1e-12

    u = lp.pmp_controls(lp.Momentum(2.0, 3.0, 4.0))
    assert close(u.as_tuple(), (1.0, 3.0, 0.0))

    assert abs(lp.u_pair(lp.Pose2(0, 0, 0), lp.Pose2(0, 4, 0), 1.0, 1.0) - 1 / 24) < 1e-15

    traj = lp.simulate(os.path.join(FIXTURES, "two_agents.json"))
    assert traj["t"][-1] == 5.0
    assert min(traj["min_pair_dist"]) > 2.0

    res = lp.shoot(os.path.join(FIXTURES, "two_agents_shoot.json"))
    assert res.converged and res.residual_norm <= 1e-8, res.residual_norm

    rows = lp.check(os.path.join(FIXTURES, "two_agents.json"), samples=200)
    assert not [r for r in rows if r[1] == "FAIL"], rows

    try:
        lp.simulate(os.path.join(FIXTURES, "paper_three_unicycles.json"))
    except ValueError as e:
        assert "initially in contact" in str(e)
    else:
        raise AssertionError("infeasible start accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
