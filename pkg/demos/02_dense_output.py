"""Dense output between the nodes: the local solution u_L and the improved u_IL.

u_L is the predictor polynomial in each cell; it jumps at every node.  u_IL
integrates the interpolated right-hand side from the node value, so it is
continuous and one order more accurate.
"""
import numpy as np

from aderdg import SolverConfig, builtin_problem, eval_improved, eval_local, integrate

problem = builtin_problem("harmonic")
traj = integrate(problem, 2, 10, SolverConfig(method="newton"))

# %% Values on either side of an interior node
t = traj.grid.nodes[3]
print(f"at t = {t:.4f}")
print("  u_L  left/right:", eval_local(traj, t, "left"), eval_local(traj, t, "right"))
print("  u_IL left/right:", eval_improved(traj, t, "left"), eval_improved(traj, t, "right"))
print("  node value     :", traj.node_values[3])

# %% Pointwise errors over the whole domain
ts = np.linspace(0.0, float(problem.tf), 400)
exact = np.array([problem.exact(s) for s in ts])
err_l = np.abs(np.array([eval_local(traj, s) for s in ts]) - exact).max()
err_il = np.abs(np.array([eval_improved(traj, s) for s in ts]) - exact).max()
err_n = np.abs(traj.node_values - np.array([problem.exact(s) for s in traj.grid.nodes])).max()
print(f"\nmax error: u_L {err_l:.2e}, u_IL {err_il:.2e}, nodes {err_n:.2e}")
