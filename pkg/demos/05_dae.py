"""An index-1 DAE u' = -u + (v - u), 0 = u - v, and its singular perturbation.

dae_integrate solves the limit method directly: the constraint holds at every
quadrature node.  The stiff ODE u' = F, v' = G/eps approaches that limit as
eps shrinks.
"""
import numpy as np

from aderdg import builtin_problem, constraint_residuals, dae_integrate, solve_epsilon_embedded
from aderdg.dae import split_embedded
from aderdg.testbed import dae_node_errors, fit_order

problem = builtin_problem("dae_index1")
traj = dae_integrate(problem, 2, 10)
print("max |G| at the quadrature nodes:", constraint_residuals(traj))
print("max node error:", dae_node_errors(traj).max())

# %% Node order of the limit method
pts = [(5 / m, dae_node_errors(dae_integrate(problem, 2, m)).max()) for m in range(10, 25, 2)]
print("fitted node order for N=2:", round(fit_order(pts), 2))

# %% Distance between the perturbed and the limit solutions is O(eps)
for eps in (1e-2, 1e-4, 1e-6, 1e-8):
    u, v = split_embedded(solve_epsilon_embedded(problem, eps, 2, 10), problem)
    gap = max(np.abs(u - traj.node_values).max(), np.abs(v - traj.algebraic_values).max())
    print(f"eps={eps:g}: gap {gap:.2e}")
