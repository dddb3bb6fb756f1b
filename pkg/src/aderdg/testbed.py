"""Built-in problems with exact solutions, error norms, and empirical orders."""
from dataclasses import dataclass, fields

import numpy as np

from .dae import DaeProblem, dae_integrate
from .errors import InsufficientDataError, MissingExactSolutionError, UnknownProblemError
from .local import cell_improved, cell_local, subnode_taus
from .nonlinear import SolverConfig
from .ode import OdeProblem, integrate
from .scalar import FLOAT64, to_float
from .special import pendulum_exact

STANDARD_GRIDS = (10, 12, 14, 16, 18, 20, 22, 24)
DEFAULT_SUBNODES = 50


# -- problems -----------------------------------------------------------------

def _dahlquist(F):
    return OdeProblem(rhs=lambda u, t: -u, t0=0.0, tf=5.0, u0=F.array([1]),
                      exact=lambda t: np.array([F.exp(-t)]), name="dahlquist")


def _lin_exp(F):
    def exact(t):
        ep, em = F.exp(t), F.exp(-t)
        return np.array([(ep - em) / 2, (ep + em) / 2])

    return OdeProblem(rhs=lambda u, t: np.array([u[1], u[0]]), t0=0.0, tf=2.0,
                      u0=F.array([0, 1]), exact=exact, name="lin_exp")


def _harmonic(F):
    return OdeProblem(rhs=lambda u, t: np.array([u[1], -u[0]]), t0=0.0, tf=4 * F.pi,
                      u0=F.array([1, 0]),
                      exact=lambda t: np.array([F.cos(t), -F.sin(t)]), name="harmonic")


def _pendulum(F, omega0=1.0, phi0=None):
    with F.context():
        phi0 = F.pi / 2 if phi0 is None else F.scalar(phi0)
        omega0 = F.scalar(omega0)
        w2 = omega0 * omega0

    def rhs(u, t):
        return np.array([u[1], -w2 * F.sin(u[0])])

    def exact(t):
        return np.array(pendulum_exact(t, omega0, phi0, F))

    return OdeProblem(rhs=rhs, t0=0.0, tf=10.0, u0=F.array([phi0, 0]), exact=exact,
                      name="pendulum")


def _bratu(F):
    return OdeProblem(rhs=lambda u, t: np.array([u[1], 2 * F.exp(u[0])]), t0=0.0, tf=1.0,
                      u0=F.array([0, 0]),
                      exact=lambda t: np.array([-2 * F.log(F.cos(t)), 2 * F.tan(t)]),
                      name="bratu")


def _dae_index1(F):
    # a disguised Dahlquist problem: v tracks u, exact u = v = exp(-t)
    def exact(t):
        e = F.exp(-t)
        return np.array([e]), np.array([e])

    return DaeProblem(f_rhs=lambda u, v, t: -u + (v - u), g_con=lambda u, v, t: u - v,
                      t0=0.0, tf=5.0, u0=F.array([1]), v0=F.array([1]), exact=exact,
                      name="dae_index1")


PROBLEMS = {
    "dahlquist": _dahlquist,
    "lin_exp": _lin_exp,
    "harmonic": _harmonic,
    "pendulum": _pendulum,
    "bratu": _bratu,
    "dae_index1": _dae_index1,
}


def builtin_problem(name, field=FLOAT64):
    try:
        factory = PROBLEMS[name]
    except KeyError:
        raise UnknownProblemError(name, PROBLEMS) from None
    with field.context():
        return factory(field)


# -- errors -------------------------------------------------------------------

def _require_exact(problem):
    if problem.exact is None:
        raise MissingExactSolutionError(f"problem {problem.name!r} has no exact solution")


def _exact_rows(problem, times):
    """Exact differential variables at ``times``, one row per time."""
    _require_exact(problem)
    if isinstance(problem, DaeProblem):
        return np.array([np.atleast_1d(problem.exact(t)[0]) for t in times])
    return np.array([np.atleast_1d(problem.exact(t)) for t in times])


def _row_max(diff):
    return to_float(np.abs(diff)).max(axis=1) if diff.size else np.zeros(0)


@dataclass(frozen=True, eq=False)
class LocalErrors:
    """Pointwise errors: sub-node errors of u_L and u_IL, node errors of u_n."""

    t: np.ndarray
    cell: np.ndarray
    eps_local: np.ndarray
    eps_improved: np.ndarray
    node_t: np.ndarray
    eps_node: np.ndarray


def local_errors(traj, subnodes=DEFAULT_SUBNODES):
    """Errors of u_L and u_IL on the sub-node lattice and of u_n at the nodes.

    For DAE trajectories the sub-node errors cover the differential variables
    and the node errors cover both blocks.
    """
    problem, field = traj.problem, traj.field
    taus = subnode_taus(subnodes, field)
    nodes = traj.grid.nodes
    ts, cells, e_loc, e_imp = [], [], [], []
    with field.context():
        for n in range(traj.grid.steps):
            t = nodes[n] + taus * (nodes[n + 1] - nodes[n])
            ex = _exact_rows(problem, t)
            e_loc.append(_row_max(cell_local(traj, n, taus) - ex))
            e_imp.append(_row_max(cell_improved(traj, n, taus) - ex))
            ts.append(to_float(t))
            cells.append(np.full(subnodes, n))
        if isinstance(problem, DaeProblem):
            eps_node = dae_node_errors(traj)
        else:
            eps_node = _row_max(traj.node_values - _exact_rows(problem, nodes))
    return LocalErrors(t=np.concatenate(ts), cell=np.concatenate(cells),
                       eps_local=np.concatenate(e_loc), eps_improved=np.concatenate(e_imp),
                       node_t=to_float(nodes), eps_node=eps_node)


@dataclass(frozen=True)
class GlobalErrors:
    e_n_f: float
    e_n_Linf: float
    e_n_L1: float
    e_n_L2: float
    e_l_Linf: float
    e_l_L1: float
    e_l_L2: float
    e_imp_Linf: float
    e_imp_L1: float
    e_imp_L2: float

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


NORMS = tuple(f.name for f in fields(GlobalErrors))


def _norms(err, weights):
    return float(err.max()), float(np.sum(weights * err)), float(np.sqrt(np.sum(weights * err ** 2)))


def global_errors(traj, subnodes=DEFAULT_SUBNODES, local=None):
    """Node norms weighted by the cell widths; sub-node sums weighted by dt_n / S."""
    loc = local if local is not None else local_errors(traj, subnodes)
    widths = to_float(traj.grid.widths)
    # node n carries dt_n; the final node reuses the last width
    node_w = np.append(widths, widths[-1])
    sub_w = widths[loc.cell] / subnodes
    n_inf, n_l1, n_l2 = _norms(loc.eps_node, node_w)
    l_inf, l_l1, l_l2 = _norms(loc.eps_local, sub_w)
    i_inf, i_l1, i_l2 = _norms(loc.eps_improved, sub_w)
    return GlobalErrors(e_n_f=float(loc.eps_node[-1]), e_n_Linf=n_inf, e_n_L1=n_l1, e_n_L2=n_l2,
                        e_l_Linf=l_inf, e_l_L1=l_l1, e_l_L2=l_l2,
                        e_imp_Linf=i_inf, e_imp_L1=i_l1, e_imp_L2=i_l2)


def dae_node_errors(traj):
    """Max-norm node error over both differential and algebraic variables."""
    problem = traj.problem
    _require_exact(problem)
    with traj.field.context():
        out = []
        for n, t in enumerate(traj.grid.nodes):
            u, v = problem.exact(t)
            du = to_float(np.abs(traj.node_values[n] - np.atleast_1d(u)))
            dv = to_float(np.abs(traj.algebraic_values[n] - np.atleast_1d(v)))
            out.append(max(du.max(), dv.max()))
    return np.array(out)


# -- orders -------------------------------------------------------------------

def error_floor(scale=1.0, eps=None, solver_tol=0.0):
    """Pointwise errors below this are noise and are left out of order fits.

    The larger of the rounding floor 100 eps (1 + scale) and ten times
    ``solver_tol``, the tolerance the predictor coefficients were solved to.
    """
    eps = float(np.finfo(float).eps) if eps is None else float(eps)
    return max(100 * eps * (1 + scale), 10 * float(solver_tol))


def norm_floors(scale, span, eps=None, solver_tol=0.0):
    """Fit floor for each global norm.

    u_L interpolates the predictor coefficients directly, so its norms also
    respect the solver tolerance; node values and u_IL see coefficient errors
    only through a factor dt.  L1 and L2 norms integrate over the domain and
    scale their floor by ``span`` and ``sqrt(span)``.
    """
    floors = {}
    for name in NORMS:
        pointwise = error_floor(scale, eps, solver_tol if name.startswith("e_l_") else 0.0)
        if name.endswith("_L1"):
            pointwise *= max(span, 1.0)
        elif name.endswith("_L2"):
            pointwise *= max(np.sqrt(span), 1.0)
        floors[name] = pointwise
    return floors


def usable_points(points, floor=None):
    """The (dt, e) pairs an order fit keeps: finite, positive and not under ``floor``."""
    floor = error_floor() if floor is None else floor
    return [(float(dt), float(e)) for dt, e in points if np.isfinite(e) and e > 0 and e >= floor]


def fit_order(points, floor=None):
    """Least-squares slope of lg e against lg dt, ignoring points under the floor."""
    floor = error_floor() if floor is None else floor
    usable = usable_points(points, floor)
    if len(usable) < 2:
        raise InsufficientDataError(
            f"need at least 2 errors above the floor {floor:.2e}, got {len(usable)}"
        )
    x = np.log10([p[0] for p in usable])
    y = np.log10([p[1] for p in usable])
    if np.ptp(x) == 0:
        raise InsufficientDataError("all usable points share the same step")
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


@dataclass(eq=False)
class ConvergenceReport:
    degree: int
    grids: list
    dts: list
    errors: list
    orders: dict
    theory: dict
    floors: dict = None

    def errors_by_norm(self):
        return {name: [getattr(e, name) for e in self.errors] for name in NORMS}

    def as_dict(self):
        return {
            "degree": self.degree,
            "grids": list(self.grids),
            "errors": self.errors_by_norm(),
            "orders": dict(self.orders),
            "theory": dict(self.theory),
        }


def theoretical_orders(degree):
    return {"n": 2 * degree + 1, "l": degree + 1, "imp": degree + 2}


def convergence_study(problem, degrees, grids=STANDARD_GRIDS, cfg=None,
                      subnodes=DEFAULT_SUBNODES, field=FLOAT64):
    """One ConvergenceReport per degree over uniform grids of ``grids`` cells."""
    if isinstance(problem, str):
        problem = builtin_problem(problem, field)
    _require_exact(problem)
    cfg = cfg or SolverConfig(method="newton")
    run = dae_integrate if isinstance(problem, DaeProblem) else integrate
    span = float(problem.tf) - float(problem.t0)
    reports = []
    for degree in degrees:
        errs, scale = [], 0.0
        for m in grids:
            try:
                traj = run(problem, degree, m, cfg, field)
            except Exception as exc:
                exc.args = (f"N={degree}, M={m}: {exc.args[0] if exc.args else exc}",) + exc.args[1:]
                raise
            errs.append(global_errors(traj, subnodes))
            scale = max(scale, float(np.abs(to_float(traj.node_values)).max()))
        dts = [span / m for m in grids]
        with field.context():
            res = cfg.resolved(field)
            solver_tol = float(res.rtol * (1 + scale) + res.atol)
            floors = norm_floors(scale, span, field.eps, solver_tol)
        orders = {}
        for name in NORMS:
            try:
                orders[name] = fit_order([(dt, getattr(e, name)) for dt, e in zip(dts, errs)],
                                         floors[name])
            except InsufficientDataError:
                orders[name] = None
        reports.append(ConvergenceReport(degree=degree, grids=list(grids), dts=dts, errors=errs,
                                         orders=orders, theory=theoretical_orders(degree),
                                         floors=floors))
    return reports
