import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aderdg import DegreeTooHighError, MPField, build_tables, dump_tables, invariant_residuals
from aderdg.basis import lagrange_coefficients, legendre_nodes
from aderdg.errors import SingularMatrixError


def test_degree_zero_tables():
    t = build_tables(0)
    assert t.nodes.tolist() == [0.5]
    assert t.weights.tolist() == [1.0]
    assert t.A.tolist() == [[1.0]]
    assert t.K.tolist() == [[1.0]]


def test_degree_one_nodes_from_quadratic_formula():
    # roots of 6 tau^2 - 6 tau + 1
    r = math.sqrt(3) / 6
    t = build_tables(1)
    np.testing.assert_allclose(t.nodes, [0.5 - r, 0.5 + r], rtol=0, atol=1e-16)
    np.testing.assert_allclose(t.weights, [0.5, 0.5], atol=1e-16)


@pytest.mark.parametrize("degree", range(0, 12))
def test_nodes_and_weights_match_numpy_gauss_legendre(degree):
    x, w = np.polynomial.legendre.leggauss(degree + 1)
    t = build_tables(degree)
    np.testing.assert_allclose(t.nodes, (x + 1) / 2, atol=1e-14)
    np.testing.assert_allclose(t.weights, w / 2, atol=1e-14)


@pytest.mark.parametrize("degree", range(0, 9))
def test_invariants_binary64(degree):
    res = invariant_residuals(build_tables(degree))
    assert res.pop("min_weight") > 0
    assert max(res.values()) <= 1e-11, res


def test_invariants_extended_precision():
    res = invariant_residuals(build_tables(10, MPField(40)))
    res.pop("min_weight")
    assert max(res.values()) <= 1e-30


@pytest.mark.parametrize("degree", [1, 2, 4])
def test_A_matches_independent_quadrature_assembly(degree):
    # K_pq = phi_p(0) phi_q(0) + int phi_p phi_q', assembled with a fine Gauss rule
    t = build_tables(degree)
    x, w = np.polynomial.legendre.leggauss(40)
    x, w = (x + 1) / 2, w / 2
    vals = t.basis_at(x)
    coeffs = t.lagrange_coeffs
    dvals = np.array([[sum(k * coeffs[p, k] * xi ** (k - 1) for k in range(1, degree + 1))
                       for p in range(degree + 1)] for xi in x])
    K = np.outer(t.phi_at_0, t.phi_at_0) + (vals * w[:, None]).T @ dvals
    np.testing.assert_allclose(t.K, K, atol=1e-12)
    np.testing.assert_allclose(t.A, np.linalg.solve(K, np.diag(t.weights)), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(degree=st.integers(0, 6), tau=st.floats(0, 1))
def test_partition_of_unity_and_integrated_basis(degree, tau):
    t = build_tables(degree)
    assert abs(t.basis_at([tau])[0].sum() - 1) <= 1e-13
    # the integrated basis sums to tau
    assert abs(t.integrated_basis_at([tau])[0].sum() - tau) <= 1e-14


@settings(max_examples=50, deadline=None)
@given(degree=st.integers(1, 6), tau=st.floats(0, 1))
def test_basis_reproduces_polynomials(degree, tau):
    t = build_tables(degree)
    for k in range(degree + 1):
        assert abs(t.basis_at([tau])[0] @ t.nodes ** k - tau ** k) <= 1e-13
        exact = tau ** (k + 1) / (k + 1)
        assert abs(t.integrated_basis_at([tau])[0] @ t.nodes ** k - exact) <= 1e-13


def test_tables_are_read_only_and_cached():
    t = build_tables(3)
    assert build_tables(3) is t
    with pytest.raises(ValueError):
        t.A[0, 0] = 1.0


def test_degree_cap_and_negative_degree():
    with pytest.raises(DegreeTooHighError):
        build_tables(31)
    with pytest.raises(ValueError):
        build_tables(-1)


def test_high_degree_warns():
    with pytest.warns(RuntimeWarning):
        build_tables(21)


def test_legendre_nodes_extended_precision():
    nodes = legendre_nodes(4, MPField(40))
    x, _ = np.polynomial.legendre.leggauss(5)
    np.testing.assert_allclose(np.array(nodes, dtype=float), (x + 1) / 2, atol=1e-15)


def test_duplicate_nodes_rejected():
    with pytest.raises(SingularMatrixError) as info:
        lagrange_coefficients(np.array([0.1, 0.5, 0.5]))
    assert info.value.pair == (1, 2)


def test_dump_tables_round_trip():
    t = build_tables(2)
    doc = json.loads(dump_tables(t))
    assert set(doc) == {"degree", "nodes", "weights", "K", "A"}
    assert np.array_equal(np.array(doc["A"]), t.A)
