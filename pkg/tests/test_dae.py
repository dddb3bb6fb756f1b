import numpy as np
import pytest

from aderdg import (ConvergenceError, DaeProblem, InconsistentInitialError, SingularMatrixError,
                    builtin_problem, constraint_residuals, dae_integrate,
                    eval_improved_differential, eval_local_algebraic, solve_epsilon_embedded)
from aderdg.dae import split_embedded


@pytest.fixture(scope="module")
def problem():
    return builtin_problem("dae_index1")


@pytest.mark.parametrize("degree", [0, 1, 2, 3])
def test_constraint_enforced_at_every_quadrature_node(problem, degree):
    traj = dae_integrate(problem, degree, 8)
    assert constraint_residuals(traj) <= 1e-12
    # v = u on this problem, so both blocks coincide
    np.testing.assert_allclose(traj.node_values, traj.algebraic_values, atol=1e-13)


def test_node_accuracy(problem):
    traj = dae_integrate(problem, 3, 10)
    t = traj.grid.nodes
    np.testing.assert_allclose(traj.node_values[:, 0], np.exp(-t), atol=1e-9)


def test_nonlinear_dae_against_reduced_ode():
    # u' = -v, 0 = v - u^3  reduces to u' = -u^3, u = 1/sqrt(1 + 2t)
    p = DaeProblem(f_rhs=lambda u, v, t: -v, g_con=lambda u, v, t: v - u ** 3,
                   t0=0.0, tf=1.0, u0=[1.0], v0=[1.0])
    t = np.linspace(0.0, 1.0, 11)
    u, v = 1 / np.sqrt(1 + 2 * t), (1 + 2 * t) ** -1.5
    plain = dae_integrate(p, 3, 10)
    np.testing.assert_allclose(plain.node_values[:, 0], u, atol=1e-10)
    # v_{n+1} = r(1) extrapolates the predictor: only local accuracy
    assert 1e-7 < np.abs(plain.algebraic_values[:, 0] - v).max() < 1e-4
    proj = dae_integrate(p, 3, 10, reproject=True)
    np.testing.assert_allclose(proj.algebraic_values[:, 0], v, atol=1e-10)


@pytest.mark.parametrize("epsilon", [1e-2, 1e-4, 1e-6])
def test_epsilon_embedding_approaches_limit_linearly(problem, epsilon):
    base = dae_integrate(problem, 2, 10)
    emb = solve_epsilon_embedded(problem, epsilon, 2, 10)
    u, v = split_embedded(emb, problem)
    gap = max(np.abs(u - base.node_values).max(), np.abs(v - base.algebraic_values).max())
    assert 0.1 * epsilon <= gap <= epsilon


def test_reprojection_keeps_constraint(problem):
    traj = dae_integrate(problem, 2, 10, reproject=True)
    g = traj.node_values - traj.algebraic_values
    assert np.abs(g).max() <= 1e-13


def test_dense_output(problem):
    traj = dae_integrate(problem, 3, 10)
    t = 1.23
    assert abs(eval_improved_differential(traj, t)[0] - np.exp(-t)) <= 1e-5
    assert abs(eval_local_algebraic(traj, t)[0] - np.exp(-t)) <= 1e-4


def test_inconsistent_initial_values():
    with pytest.raises(InconsistentInitialError):
        DaeProblem(f_rhs=lambda u, v, t: -u, g_con=lambda u, v, t: u - v,
                   t0=0.0, tf=1.0, u0=[1.0], v0=[0.5])


def test_undetermined_algebraic_variable_fails_loudly():
    # v enters neither block, so the Newton matrix is singular
    p = DaeProblem(f_rhs=lambda u, v, t: -u, g_con=lambda u, v, t: u - np.exp(-t),
                   t0=0.0, tf=1.0, u0=[1.0], v0=[0.0])
    with pytest.raises((SingularMatrixError, ConvergenceError)) as info:
        dae_integrate(p, 1, 4)
    assert "cell 0" in str(info.value)
