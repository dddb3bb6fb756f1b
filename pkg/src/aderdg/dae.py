"""ADER-DG for semi-explicit index-1 DAEs: u' = F(u, v, t), 0 = G(u, v, t).

The predictor solved here is the eps -> 0 limit of the method applied to the
singularly perturbed system u' = F, eps v' = G: the differential block keeps
its usual form and the algebraic block becomes G = 0 at every quadrature
node.  ``solve_epsilon_embedded`` integrates the perturbed system itself and
exists to cross-check that limit.
"""
from dataclasses import dataclass

import numpy as np

from .basis import build_tables
from .errors import (AderDGError, ConvergenceError, InconsistentInitialError,
                     NonFiniteError, SingularMatrixError)
from .local import cell_improved, locate
from .nonlinear import SolverConfig, solve_nonlinear
from .ode import Grid, OdeProblem, SolutionTrajectory, _annotate, _check_cover, integrate
from .scalar import FLOAT64, is_finite, max_abs, to_float


@dataclass(frozen=True, eq=False)
class DaeProblem:
    f_rhs: object
    g_con: object
    t0: float
    tf: float
    u0: np.ndarray
    v0: np.ndarray
    exact: object = None
    name: str = ""
    consistency_tol: float = None

    def __post_init__(self):
        for attr in ("u0", "v0"):
            val = np.atleast_1d(np.asarray(getattr(self, attr)))
            if val.dtype != object:
                val = val.astype(float)
            object.__setattr__(self, attr, val)
        if not self.t0 < self.tf:
            raise ValueError(f"need t0 < tf, got [{self.t0}, {self.tf}]")
        f = np.atleast_1d(self.f_rhs(self.u0.copy(), self.v0.copy(), self.t0))
        g = np.atleast_1d(self.g_con(self.u0.copy(), self.v0.copy(), self.t0))
        if f.shape != self.u0.shape:
            raise ValueError(f"f_rhs returned shape {f.shape}, expected {self.u0.shape}")
        if g.shape != self.v0.shape:
            raise ValueError(f"g_con returned shape {g.shape}, expected {self.v0.shape}")
        tol = self.consistency_tol
        if tol is None:
            tol = 1e-10 * (1 + float(max_abs(to_float(self.v0))))
        gap = float(max_abs(to_float(g)))
        if gap > tol:
            raise InconsistentInitialError(
                f"initial values violate the constraint: |G(u0, v0, t0)| = {gap:.3e} > {tol:.3e}"
            )

    @property
    def differential_dimension(self):
        return self.u0.size

    @property
    def algebraic_dimension(self):
        return self.v0.size


@dataclass(eq=False)
class DaeCellCoefficients:
    q: np.ndarray
    r: np.ndarray
    f: np.ndarray
    iterations: int = 0
    residual: float = 0.0


@dataclass(eq=False)
class DaeTrajectory(SolutionTrajectory):
    """Trajectory whose cells also carry the algebraic coefficients r."""

    algebraic_values: np.ndarray = None


def _eval_blocks(problem, q, r, times, field):
    n = q.shape[0]
    f = field.zeros(q.shape)
    g = field.zeros(r.shape)
    for p in range(n):
        with np.errstate(over="ignore", invalid="ignore"):
            fp = np.atleast_1d(problem.f_rhs(q[p].copy(), r[p].copy(), times[p]))
            gp = np.atleast_1d(problem.g_con(q[p].copy(), r[p].copy(), times[p]))
        if not (is_finite(fp) and is_finite(gp)):
            raise NonFiniteError(
                f"DAE right-hand side is non-finite at quadrature node {p}", node=p
            )
        f[p] = fp
        g[p] = gp
    return f, g


def dae_predictor_solve(tables, problem, u_n, v_prev, t_n, dt, cfg=None):
    """Newton solve of the stacked predictor system for (q, r)."""
    field = tables.field
    cfg = (cfg or SolverConfig()).with_method("newton")
    with field.context():
        u_n = field.array(u_n).ravel()
        v_prev = field.array(v_prev).ravel()
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt}")
        n, du, dv = tables.size, u_n.size, v_prev.size
        times = t_n + tables.nodes * dt
        A = tables.A

        def split(x):
            return x[: n * du].reshape(n, du), x[n * du:].reshape(n, dv)

        def residual(x):
            q, r = split(x)
            f, g = _eval_blocks(problem, q, r, times, field)
            return np.concatenate([(q - dt * (A @ f) - u_n).ravel(), g.ravel()])

        guess = np.concatenate([np.tile(u_n, n), np.tile(v_prev, n)])
        try:
            res = solve_nonlinear(residual, guess, cfg, scale=max_abs(u_n), field=field)
        except (ConvergenceError, SingularMatrixError) as exc:
            x = getattr(exc, "iterate", None)
            detail = ""
            if x is not None:
                try:
                    rr = residual(x)
                    detail = (f"; differential block residual {float(max_abs(rr[: n * du])):.3e}, "
                              f"algebraic block residual {float(max_abs(rr[n * du:])):.3e}")
                except AderDGError:
                    pass
            exc.args = (f"{exc.args[0]}{detail} (a singular or divergent Newton iteration "
                        "may indicate a higher-index or inconsistent DAE)",) + exc.args[1:]
            raise
        q, r = split(res.x)
        q, r = q.copy(), r.copy()
        f, _ = _eval_blocks(problem, q, r, times, field)
    return DaeCellCoefficients(q=q, r=r, f=f, iterations=res.iterations, residual=res.residual)


def dae_node_update(tables, u_n, cell, dt):
    """(u_{n+1}, v_{n+1}): quadrature update for u, r_n(1) for v."""
    with tables.field.context():
        u_next = u_n + dt * (tables.weights @ cell.f)
        v_next = tables.phi_at_1 @ cell.r
    return u_next, v_next


def _reproject(problem, u, v, t, cfg, field):
    def residual(x):
        return np.atleast_1d(problem.g_con(u, x, t))

    return solve_nonlinear(residual, v, cfg.with_method("newton"), field=field).x


def dae_integrate(problem, degree, grid, cfg=None, field=FLOAT64, reproject=False):
    """Integrate a DaeProblem; ``reproject`` re-solves G(u_{n+1}, v, t_{n+1}) = 0 after each step."""
    tables = degree if hasattr(degree, "A") else build_tables(degree, field)
    field = tables.field
    cfg = cfg or SolverConfig(method="newton")
    if not isinstance(grid, Grid):
        grid = Grid.uniform(problem.t0, problem.tf, int(grid), field)
    _check_cover(grid, problem)
    with field.context():
        nodes = grid.nodes
        u = field.array(problem.u0)
        v = field.array(problem.v0)
        us, vs, cells = [u], [v], []
        for n in range(grid.steps):
            dt = nodes[n + 1] - nodes[n]
            try:
                cell = dae_predictor_solve(tables, problem, u, v, nodes[n], dt, cfg)
            except AderDGError as exc:
                raise _annotate(exc, f"cell {n}")
            u, v = dae_node_update(tables, u, cell, dt)
            if reproject:
                v = _reproject(problem, u, v, nodes[n + 1], cfg, field)
            cells.append(cell)
            us.append(u)
            vs.append(v)
        node_values = np.array(us, dtype=us[0].dtype)
        alg_values = np.array(vs, dtype=vs[0].dtype)
    return DaeTrajectory(problem=problem, grid=grid, tables=tables, node_values=node_values,
                         cells=cells, algebraic_values=alg_values)


def eval_improved_differential(traj, t, side="right"):
    """Improved local solution of the differential variables only.

    No improved form exists for the algebraic variables.
    """
    pt = locate(traj.grid, t, side)
    return cell_improved(traj, pt.cell, [pt.tau])[0]


def eval_local_algebraic(traj, t, side="right"):
    pt = locate(traj.grid, t, side)
    with traj.field.context():
        return traj.tables.basis_at([pt.tau])[0] @ traj.cells[pt.cell].r


def embedded_problem(problem, epsilon):
    """The stiff ODE u' = F, v' = G / epsilon on the stacked state (u, v)."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    du = problem.differential_dimension

    def rhs(w, t):
        u, v = w[:du], w[du:]
        f = np.atleast_1d(problem.f_rhs(u, v, t))
        g = np.atleast_1d(problem.g_con(u, v, t))
        return np.concatenate([f, g / epsilon])

    exact = None
    if problem.exact is not None:
        def exact(t):
            u, v = problem.exact(t)
            return np.concatenate([np.atleast_1d(u), np.atleast_1d(v)])

    return OdeProblem(rhs=rhs, t0=problem.t0, tf=problem.tf,
                      u0=np.concatenate([problem.u0, problem.v0]), exact=exact,
                      name=f"{problem.name}[eps={epsilon:g}]")


def solve_epsilon_embedded(problem, epsilon, degree, grid, cfg=None, field=FLOAT64):
    """Integrate the eps-embedded ODE with Newton; node values stack (u, v)."""
    cfg = (cfg or SolverConfig()).with_method("newton")
    return integrate(embedded_problem(problem, epsilon), degree, grid, cfg, field)


def split_embedded(traj, problem):
    """Split stacked (u, v) node values of an eps-embedded run."""
    du = problem.differential_dimension
    return traj.node_values[:, :du], traj.node_values[:, du:]


def constraint_residuals(traj):
    """Max |G(q_p, r_p, t(tau_p))| over every cell and quadrature node."""
    problem, tables, field = traj.problem, traj.tables, traj.field
    worst = 0.0
    with field.context():
        nodes = traj.grid.nodes
        for n, cell in enumerate(traj.cells):
            times = nodes[n] + tables.nodes * (nodes[n + 1] - nodes[n])
            _, g = _eval_blocks(problem, cell.q, cell.r, times, field)
            worst = max(worst, float(max_abs(g)))
    return worst
