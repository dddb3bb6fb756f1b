"""ADER-DG time stepping for first-order ODE systems u' = F(u, t)."""
from dataclasses import dataclass, field as dc_field

import numpy as np

from .basis import build_tables
from .errors import AderDGError, NonFiniteError
from .nonlinear import SolverConfig, solve_nonlinear
from .scalar import FLOAT64, is_finite, max_abs, to_float


@dataclass(frozen=True, eq=False)
class OdeProblem:
    """Initial value problem u' = rhs(u, t), u(t0) = u0 on [t0, tf]."""

    rhs: object
    t0: float
    tf: float
    u0: np.ndarray
    exact: object = None
    name: str = ""

    def __post_init__(self):
        u0 = np.atleast_1d(np.asarray(self.u0))
        if u0.dtype != object:
            u0 = u0.astype(float)
        object.__setattr__(self, "u0", u0)
        if not self.t0 < self.tf:
            raise ValueError(f"need t0 < tf, got [{self.t0}, {self.tf}]")
        out = np.atleast_1d(self.rhs(u0.copy(), self.t0))
        if out.shape != u0.shape:
            raise ValueError(f"rhs returned shape {out.shape}, expected {u0.shape}")
        if self.exact is not None:
            ex = np.atleast_1d(self.exact(self.t0))
            if ex.shape != u0.shape:
                raise ValueError(f"exact returned shape {ex.shape}, expected {u0.shape}")
            gap = float(max_abs(to_float(ex) - to_float(u0)))
            if gap > 1e-10 * (1 + float(max_abs(to_float(u0)))):
                raise ValueError(f"exact(t0) differs from u0 by {gap:.3e}")

    @property
    def dimension(self):
        return self.u0.size


@dataclass(frozen=True, eq=False)
class Grid:
    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes)
        if nodes.dtype != object:
            nodes = nodes.astype(float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("a grid needs at least two nodes")
        if not np.all(np.diff(to_float(nodes)) > 0):
            raise ValueError("grid nodes must be strictly increasing")
        nodes.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def uniform(cls, t0, tf, steps, field=FLOAT64):
        """``steps`` equal cells; node n is t0 + n * (tf - t0) / steps."""
        if steps < 1:
            raise ValueError("steps must be >= 1")
        with field.context():
            t0 = field.scalar(t0)
            dt = (field.scalar(tf) - t0) / steps
            nodes = field.array([t0 + n * dt for n in range(steps)] + [field.scalar(tf)])
        return cls(nodes)

    @property
    def steps(self):
        return self.nodes.size - 1

    @property
    def widths(self):
        return np.diff(self.nodes)

    @property
    def t0(self):
        return self.nodes[0]

    @property
    def tf(self):
        return self.nodes[-1]


@dataclass(eq=False)
class CellCoefficients:
    """Predictor expansion coefficients for one cell.

    ``q[p]`` is the coefficient of phi_p; ``f[p]`` caches F(q[p], t(tau_p)).
    """

    q: np.ndarray
    f: np.ndarray
    iterations: int = 0
    residual: float = 0.0


@dataclass(eq=False)
class SolutionTrajectory:
    problem: object
    grid: Grid
    tables: object
    node_values: np.ndarray
    cells: list = dc_field(default_factory=list)

    @property
    def degree(self):
        return self.tables.degree

    @property
    def field(self):
        return self.tables.field

    @property
    def dimension(self):
        return self.node_values.shape[1]


def _eval_rhs(rhs, q, times, field):
    out = field.zeros(q.shape)
    for p in range(q.shape[0]):
        # overflow is reported below as NonFiniteError, not as a numpy warning
        with np.errstate(over="ignore", invalid="ignore"):
            fp = np.atleast_1d(rhs(q[p].copy(), times[p]))
        if not is_finite(fp):
            raise NonFiniteError(
                f"right-hand side is non-finite at quadrature node {p} (t={float(times[p])!r})",
                node=p,
            )
        out[p] = fp
    return out


def predictor_solve(tables, problem, u_n, t_n, dt, cfg=None):
    """Solve q_p - dt * sum_q A_pq F(q_q, t(tau_q)) = u_n for the cell coefficients."""
    field = tables.field
    cfg = cfg or SolverConfig()
    with field.context():
        u_n = field.array(u_n).ravel()
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt}")
        if not is_finite(u_n):
            raise NonFiniteError("initial state of the cell is non-finite")
        n, dim = tables.size, u_n.size
        times = t_n + tables.nodes * dt
        A = tables.A

        def residual(x):
            q = x.reshape(n, dim)
            fq = _eval_rhs(problem.rhs, q, times, field)
            return (q - dt * (A @ fq) - u_n).ravel()

        guess = np.tile(u_n, n)
        res = solve_nonlinear(residual, guess, cfg, scale=max_abs(u_n), field=field)
        q = res.x.reshape(n, dim)
        f = _eval_rhs(problem.rhs, q, times, field)
    return CellCoefficients(q=q, f=f, iterations=res.iterations, residual=res.residual)


def node_update(tables, u_n, cell, dt):
    """u_{n+1} = u_n + dt * sum_p w_p F(q_p, t(tau_p))."""
    with tables.field.context():
        return u_n + dt * (tables.weights @ cell.f)


def _annotate(exc, where):
    if exc.args and isinstance(exc.args[0], str):
        exc.args = (f"{where}: {exc.args[0]}",) + exc.args[1:]
    exc.cell = where
    return exc


def integrate(problem, degree, grid, cfg=None, field=FLOAT64):
    """Apply predictor + node update cell by cell over ``grid``.

    ``grid`` may be a Grid or an integer number of uniform steps.
    """
    tables = degree if hasattr(degree, "A") else build_tables(degree, field)
    field = tables.field
    if not isinstance(grid, Grid):
        grid = Grid.uniform(problem.t0, problem.tf, int(grid), field)
    _check_cover(grid, problem)
    with field.context():
        nodes = grid.nodes
        u = field.array(problem.u0)
        values = [u]
        cells = []
        for n in range(grid.steps):
            dt = nodes[n + 1] - nodes[n]
            try:
                cell = predictor_solve(tables, problem, u, nodes[n], dt, cfg)
            except AderDGError as exc:
                raise _annotate(exc, f"cell {n}")
            u = node_update(tables, u, cell, dt)
            cells.append(cell)
            values.append(u)
        node_values = np.array(values, dtype=values[0].dtype)
    return SolutionTrajectory(problem=problem, grid=grid, tables=tables,
                              node_values=node_values, cells=cells)


def _check_cover(grid, problem):
    span = abs(float(problem.tf) - float(problem.t0))
    if (abs(float(grid.t0) - float(problem.t0)) > 1e-12 * span
            or abs(float(grid.tf) - float(problem.tf)) > 1e-12 * span):
        raise ValueError("grid endpoints do not match the problem domain")
