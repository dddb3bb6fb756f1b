"""Dense output: the predictor's local solution u_L and the improved solution u_IL.

u_L is the piecewise predictor polynomial and jumps at the left end of every
cell.  u_IL integrates the interpolated right-hand side from the cell's node
value, so it is continuous and one order more accurate.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .scalar import to_float


@dataclass(frozen=True)
class EvalPoint:
    cell: int
    tau: object
    t: object


def locate(grid, t, side="right"):
    """Find the cell holding ``t``.

    With ``side="right"`` (default) cells are closed on the left, so an interior
    node t_n maps to cell n with tau = 0; ``side="left"`` maps it to cell n-1 with
    tau = 1 (the left limit).  t0 and tf always map to the first/last cell.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    nodes = grid.nodes
    fnodes = to_float(nodes)
    tf = float(t)
    slack = 1e-14 * (fnodes[-1] - fnodes[0])
    if tf < fnodes[0] - slack or tf > fnodes[-1] + slack:
        raise DomainError(f"t={tf!r} outside [{fnodes[0]!r}, {fnodes[-1]!r}]")
    n = int(np.searchsorted(fnodes, tf, side=side)) - 1
    n = min(max(n, 0), grid.steps - 1)
    tau = (t - nodes[n]) / (nodes[n + 1] - nodes[n])
    if tau < 0:
        tau = tau * 0
    elif tau > 1:
        tau = tau * 0 + 1
    return EvalPoint(cell=n, tau=tau, t=t)


def cell_local(traj, n, taus):
    """u_L at local coordinates ``taus`` of cell ``n``; rows follow ``taus``."""
    with traj.field.context():
        return traj.tables.basis_at(taus) @ traj.cells[n].q


def cell_improved(traj, n, taus):
    """u_IL at local coordinates ``taus`` of cell ``n``."""
    with traj.field.context():
        nodes = traj.grid.nodes
        dt = nodes[n + 1] - nodes[n]
        integ = traj.tables.integrated_basis_at(taus)
        f = traj.cells[n].f
        # row by row, the same reduction as the node update, so tau = 1 gives u_{n+1} bit for bit
        incr = np.array([row @ f for row in integ], dtype=f.dtype).reshape(len(integ), f.shape[1])
        return traj.node_values[n] + dt * incr


def eval_local(traj, t, side="right"):
    pt = locate(traj.grid, t, side)
    return cell_local(traj, pt.cell, [pt.tau])[0]


def eval_improved(traj, t, side="right"):
    pt = locate(traj.grid, t, side)
    return cell_improved(traj, pt.cell, [pt.tau])[0]


@dataclass(frozen=True, eq=False)
class Tabulation:
    """Aligned samples of u_L and u_IL on the sub-node lattice."""

    t: np.ndarray
    cell: np.ndarray
    tau: np.ndarray
    local: np.ndarray
    improved: np.ndarray
    node_times: np.ndarray
    node_values: np.ndarray


def subnode_taus(subnodes, field):
    """Right-inclusive lattice tau_s = s/S, s = 1..S."""
    if subnodes < 1:
        raise ValueError("subnodes must be >= 1")
    with field.context():
        return field.array([field.scalar(s) / subnodes for s in range(1, subnodes + 1)])


def tabulate(traj, subnodes=50):
    field = traj.field
    taus = subnode_taus(subnodes, field)
    nodes = traj.grid.nodes
    ts, cells, tau_col, loc, imp = [], [], [], [], []
    with field.context():
        for n in range(traj.grid.steps):
            dt = nodes[n + 1] - nodes[n]
            ts.append(nodes[n] + taus * dt)
            cells.append(np.full(subnodes, n))
            tau_col.append(taus)
            loc.append(cell_local(traj, n, taus))
            imp.append(cell_improved(traj, n, taus))
    return Tabulation(
        t=np.concatenate(ts),
        cell=np.concatenate(cells),
        tau=np.concatenate(tau_col),
        local=np.concatenate(loc),
        improved=np.concatenate(imp),
        node_times=nodes,
        node_values=traj.node_values,
    )
