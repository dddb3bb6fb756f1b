"""Degree-N constant tables: Legendre nodes, GL weights, Lagrange basis, K, M, A.

All polynomial integrals are done in monomial coefficient space; nothing here
uses quadrature.  Because monomial coefficients of the Lagrange basis grow
roughly like 5**N, the tables are assembled in a wider mpmath working
precision and rounded to the target field at the end.  For the same reason
the basis is evaluated in barycentric form rather than through the monomial
coefficients.
"""
import functools
import json
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegreeTooHighError, RootFindingError, SingularMatrixError
from .scalar import FLOAT64, MPField, max_abs, to_float


def _shifted_legendre(n, tau):
    """Value and tau-derivative of the shifted Legendre polynomial P_n at tau."""
    x = 2 * tau - 1
    p_prev, p = 1, x
    d_prev, d = 0, 2
    if n == 0:
        return 1, 0
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
        d_prev, d = d, d_prev + 2 * (2 * k + 1) * p_prev
    return p, d


def legendre_nodes(degree, field=FLOAT64, tol=None, max_iter=100):
    """Ascending roots of the shifted Legendre polynomial P_{degree+1} on (0, 1).

    Newton iteration seeded by the Chebyshev-angle estimates. ``tol`` is the
    step tolerance relative to the unit interval, defaulting to about 4.5
    machine epsilons (1e-15 at binary64).
    """
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    n = degree + 1
    with field.context():
        eps = field.eps
        if tol is None:
            tol = 4.5 * eps
        pi = field.pi
        nodes = []
        worst = 0
        for i in range(1, n + 1):
            tau = (1 - field.cos(pi * (4 * i - 1) / (4 * n + 2))) / 2
            converged = False
            for _ in range(max_iter):
                p, dp = _shifted_legendre(n, tau)
                step = p / dp
                tau = tau - step
                if abs(step) <= tol:
                    converged = True
                    break
            p, dp = _shifted_legendre(n, tau)
            resid = abs(p)
            worst = max(worst, resid)
            if not converged or resid > 100 * eps * n * n:
                raise RootFindingError(degree, worst)
            nodes.append(tau)
        out = field.array(nodes)
    return out[np.argsort(to_float(out), kind="stable")]


def lagrange_coefficients(nodes, field=FLOAT64):
    """Power coefficients ``phi[p, k]`` of the Lagrange basis on ``nodes``.

    Solves the transposed Vandermonde system with partial pivoting.
    """
    with field.context():
        nodes = field.array(nodes)
        n = len(nodes)
        eps = field.eps
        for i in range(n):
            for j in range(i + 1, n):
                if abs(nodes[i] - nodes[j]) <= 16 * eps * (1 + abs(nodes[i])):
                    raise SingularMatrixError(
                        f"Vandermonde matrix singular: nodes {i} and {j} coincide "
                        f"({float(nodes[i])!r}, {float(nodes[j])!r})",
                        pair=(i, j),
                    )
        vander = _powers(nodes, n - 1, field)
        inv = field.solve(vander, field.eye(n))
        return inv.T.copy()


def _powers(tau, top, field):
    """Matrix of tau**k for k = 0..top, one row per entry of tau."""
    tau = np.atleast_1d(tau)
    out = field.zeros((len(tau), top + 1))
    out[:, 0] = 1
    for k in range(1, top + 1):
        out[:, k] = out[:, k - 1] * tau
    return out


@dataclass(frozen=True, eq=False)
class BasisTables:
    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    lagrange_coeffs: np.ndarray
    K: np.ndarray
    M: np.ndarray
    A: np.ndarray
    phi_at_0: np.ndarray
    phi_at_1: np.ndarray
    int_coeffs: np.ndarray
    bary_weights: np.ndarray
    field: object = FLOAT64

    def __post_init__(self):
        for name in ("nodes", "weights", "lagrange_coeffs", "K", "M", "A",
                     "phi_at_0", "phi_at_1", "int_coeffs", "bary_weights"):
            getattr(self, name).flags.writeable = False

    @property
    def size(self):
        return self.degree + 1

    def basis_at(self, tau):
        """phi_p(tau) for each tau: array of shape (len(tau), N+1).

        Barycentric formula; exact unit rows at the nodes themselves.
        """
        tau = np.atleast_1d(np.asarray(tau, dtype=self.nodes.dtype))
        with self.field.context():
            diff = tau[:, None] - self.nodes[None, :]
            hit = diff == 0
            out = self.field.zeros(diff.shape)
            rows = ~hit.any(axis=1)
            if rows.any():
                c = self.bary_weights[None, :] / diff[rows]
                out[rows] = c / c.sum(axis=1)[:, None]
            out[hit] = 1
            return out

    def integrated_basis_at(self, tau):
        """int_0^tau phi_p for each tau: array of shape (len(tau), N+1).

        The (N+1)-point Gauss rule mapped to [0, tau] is exact for the degree-N
        integrand.
        """
        tau = np.atleast_1d(np.asarray(tau, dtype=self.nodes.dtype))
        n = self.size
        with self.field.context():
            vals = self.basis_at(np.outer(tau, self.nodes).ravel()).reshape(len(tau), n, n)
            out = np.einsum("k,tkp->tp", self.weights, vals)
            return tau[:, None] * out


def _assemble(degree, work):
    with work.context():
        nodes = legendre_nodes(degree, work)
        phi = lagrange_coefficients(nodes, work)
        n = degree + 1
        int_coeffs = work.zeros((n, n + 1))
        for k in range(1, n + 1):
            int_coeffs[:, k] = phi[:, k - 1] / k
        weights = int_coeffs.sum(axis=1)
        phi0 = phi[:, 0].copy()
        phi1 = phi.sum(axis=1)
        # int_0^1 phi_p phi_q' = sum_{a, b>=1} phi[p,a] * b/(a+b) * phi[q,b]
        kernel = work.zeros((n, n))
        for a in range(n):
            for b in range(1, n):
                kernel[a, b] = work.scalar(b) / (a + b)
        K = np.outer(phi0, phi0) + phi @ kernel @ phi.T
        M = work.zeros((n, n))
        for p in range(n):
            M[p, p] = weights[p]
        A = work.solve(K, M)
        bary = work.zeros(n)
        for p in range(n):
            prod = work.scalar(1)
            for j in range(n):
                if j != p:
                    prod = prod * (nodes[p] - nodes[j])
            bary[p] = 1 / prod
        return dict(nodes=nodes, weights=weights, lagrange_coeffs=phi, K=K, M=M, A=A,
                    phi_at_0=phi0, phi_at_1=phi1, int_coeffs=int_coeffs, bary_weights=bary)


@functools.lru_cache(maxsize=None)
def build_tables(degree, field=FLOAT64, work_dps=None):
    """Assemble every degree-``degree`` table in ``field``."""
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    if degree > field.max_degree:
        raise DegreeTooHighError(
            f"degree {degree} exceeds the cap {field.max_degree} for {field.name}; "
            "use an extended-precision field (Vandermonde conditioning grows exponentially)"
        )
    if degree > field.warn_degree:
        warnings.warn(f"degree {degree} is high for {field.name}; expect loss of accuracy",
                      RuntimeWarning, stacklevel=2)
    if work_dps is None:
        base = field.dps if isinstance(field, MPField) else 16
        work_dps = base + 2 * degree + 20
    raw = _assemble(degree, MPField(work_dps))
    with field.context():
        if isinstance(field, MPField):
            conv = {k: field.array(v) for k, v in raw.items()}
        else:
            conv = {k: to_float(v) for k, v in raw.items()}
    return BasisTables(degree=degree, field=field, **conv)


def tables_as_dict(tables):
    """JSON-ready subset of the tables (numbers as binary64)."""
    def lst(x):
        return to_float(np.asarray(x)).tolist()

    return {
        "degree": tables.degree,
        "nodes": lst(tables.nodes),
        "weights": lst(tables.weights),
        "K": lst(tables.K),
        "A": lst(tables.A),
    }


def dump_tables(tables, fp=None, indent=None):
    """Serialise the tables to JSON; returns the string when ``fp`` is None."""
    # float repr is the shortest round-trip form, never more than 17 digits
    text = json.dumps(tables_as_dict(tables), indent=indent)
    if fp is None:
        return text
    fp.write(text)
    return None


def invariant_residuals(tables):
    """Worst residual of each structural identity the tables must satisfy."""
    t = tables
    with t.field.context():
        n = t.size
        card = _powers(t.nodes, t.degree, t.field) @ t.lagrange_coeffs.T - t.field.eye(n)
        # the barycentric evaluator and the monomial coefficients must agree
        ends = t.basis_at(t.field.array([0, 1]))
        res = {
            "cardinality": max_abs(card),
            "weight_sum": abs(t.weights.sum() - 1),
            "row_sums": max_abs(t.K.sum(axis=1) - t.phi_at_0),
            "column_sums": max_abs(t.K.sum(axis=0) - t.phi_at_1),
            "endpoint_weights": max_abs(t.phi_at_1 @ t.A - t.weights),
            "integrated_weights": max_abs(t.int_coeffs.sum(axis=1) - t.weights),
            "barycentric_endpoints": max(max_abs(ends[0] - t.phi_at_0),
                                         max_abs(ends[1] - t.phi_at_1)),
            "integrated_basis_at_1": max_abs(t.integrated_basis_at(t.field.array([1]))[0]
                                             - t.weights),
        }
        power = 0
        for k in range(t.degree):
            lhs = t.A @ t.nodes ** k
            power = max(power, max_abs(lhs - t.nodes ** (k + 1) / (k + 1)))
        res["power_integration"] = power
        res["min_weight"] = min(t.weights)
    return {k: float(v) for k, v in res.items()}
