import numpy as np
import pytest

from aderdg import (ConvergenceError, Grid, MPField, NonFiniteError, OdeProblem, SolverConfig,
                    build_tables, builtin_problem, integrate, node_update, predictor_solve)
from aderdg.errors import DomainError

NEWTON = SolverConfig(method="newton")


def _linear(lam, u0=1.0, tf=1.0):
    return OdeProblem(rhs=lambda u, t: lam * u, t0=0.0, tf=tf, u0=[u0],
                      exact=lambda t: np.array([u0 * np.exp(lam * t)]))


@pytest.mark.parametrize("degree", [0, 1, 2, 3, 5])
@pytest.mark.parametrize("lam", [-1.0, 0.5, -20.0])
def test_linear_predictor_matches_dense_solve(degree, lam):
    # q - dt lam A q = u_n is linear: solve it directly
    t = build_tables(degree)
    dt, un = 0.3, 1.7
    cell = predictor_solve(t, _linear(lam), np.array([un]), 0.0, dt, NEWTON)
    n = degree + 1
    q = np.linalg.solve(np.eye(n) - dt * lam * t.A, np.full(n, un))
    np.testing.assert_allclose(cell.q[:, 0], q, rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(cell.f[:, 0], lam * q, rtol=1e-12, atol=1e-12)
    unext = node_update(t, np.array([un]), cell, dt)
    np.testing.assert_allclose(unext, un + dt * t.weights @ (lam * q), rtol=1e-14, atol=1e-14 * un)


def test_degree_zero_hand_computed():
    # N=0: q = u/(1 + dt), node update u - dt q
    traj = integrate(_linear(-1.0, tf=0.5), 0, 1, NEWTON)
    assert traj.cells[0].q[0, 0] == pytest.approx(2 / 3, abs=1e-15)
    assert traj.node_values[1, 0] == pytest.approx(2 / 3, abs=1e-15)


@pytest.mark.parametrize("method", ["picard", "newton"])
def test_picard_and_newton_agree(method):
    traj = integrate(builtin_problem("pendulum"), 3, 10, SolverConfig(method=method))
    ref = integrate(builtin_problem("pendulum"), 3, 10, NEWTON)
    np.testing.assert_allclose(traj.node_values, ref.node_values, atol=1e-11)


def test_harmonic_energy_nearly_conserved():
    traj = integrate(builtin_problem("harmonic"), 4, 40, NEWTON)
    energy = (traj.node_values ** 2).sum(axis=1)
    assert np.abs(energy - 1).max() <= 1e-11


def test_dahlquist_accuracy_against_exact():
    traj = integrate(builtin_problem("dahlquist"), 2, 10, NEWTON)
    assert abs(traj.node_values[-1, 0] - np.exp(-5)) <= 1e-6


def test_determinism():
    a = integrate(builtin_problem("bratu"), 2, 10)
    b = integrate(builtin_problem("bratu"), 2, 10)
    assert np.array_equal(a.node_values, b.node_values)


def test_nonuniform_grid():
    nodes = np.array([0.0, 0.1, 0.35, 0.5, 1.0])
    traj = integrate(_linear(-2.0), 3, Grid(nodes), NEWTON)
    np.testing.assert_allclose(traj.node_values[:, 0], np.exp(-2 * nodes), rtol=1e-6)


def test_extended_precision_run():
    # the truncation error is precision independent: 30 and 50 digits agree far
    # below it, and binary64 agrees to rounding
    runs = [integrate(builtin_problem("dahlquist", f), 4, 10, NEWTON, f)
            for f in (MPField(30), MPField(50))]
    with MPField(50).context():
        gap = abs(runs[0].node_values[-1, 0] - runs[1].node_values[-1, 0])
    assert gap < 1e-25
    f64 = integrate(builtin_problem("dahlquist"), 4, 10, NEWTON)
    assert abs(float(runs[1].node_values[-1, 0]) - f64.node_values[-1, 0]) < 1e-15


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(np.array([0.0, 0.5, 0.4]))
    with pytest.raises(ValueError):
        Grid.uniform(0.0, 1.0, 0)


def test_grid_must_cover_problem():
    with pytest.raises((ValueError, DomainError)):
        integrate(_linear(-1.0), 1, Grid(np.array([0.0, 0.5])))


def test_problem_validation():
    with pytest.raises(ValueError):
        OdeProblem(rhs=lambda u, t: u, t0=1.0, tf=0.0, u0=[1.0])
    with pytest.raises(ValueError):
        OdeProblem(rhs=lambda u, t: np.array([1.0, 2.0]), t0=0.0, tf=1.0, u0=[1.0])


def test_non_finite_rhs_names_cell():
    problem = OdeProblem(rhs=lambda u, t: np.array([np.nan]) if t > 0.5 else -u,
                         t0=0.0, tf=1.0, u0=[1.0])
    with pytest.raises(NonFiniteError) as info:
        integrate(problem, 1, 4, NEWTON)
    assert "cell 2" in str(info.value)


def test_blow_up_reports_cell():
    # u' = u^2 from u0 = 1 blows up at t = 1
    problem = OdeProblem(rhs=lambda u, t: u * u, t0=0.0, tf=2.0, u0=[1.0])
    with pytest.raises((ConvergenceError, NonFiniteError)) as info:
        integrate(problem, 1, 4, SolverConfig())
    assert "cell" in str(info.value)
