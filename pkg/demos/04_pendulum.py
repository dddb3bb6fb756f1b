"""A nonlinear problem: the large-amplitude pendulum phi'' = -sin(phi), phi(0) = pi/2.

The exact motion is written with Jacobi elliptic functions, which makes it
possible to measure errors of a nonlinear run exactly.
"""
import math

import numpy as np
from scipy.integrate import solve_ivp

from aderdg import SolverConfig, builtin_problem, convergence_study, integrate, pendulum_exact

# %% The elliptic-function solution agrees with a tight general-purpose ODE solve
ts = np.linspace(0, 10, 11)
ref = solve_ivp(lambda t, y: [y[1], -math.sin(y[0])], (0, 10), [math.pi / 2, 0],
                method="DOP853", rtol=1e-13, atol=1e-14, t_eval=ts).y.T
exact = np.array([pendulum_exact(t, 1.0, math.pi / 2) for t in ts])
print("exact vs DOP853:", np.abs(ref - exact).max())

# %% One run, then the empirical orders for N = 2
traj = integrate(builtin_problem("pendulum"), 2, 20, SolverConfig(method="newton"))
print("final state:", traj.node_values[-1], "exact:", exact[-1])
(rep,) = convergence_study("pendulum", [2])
print({k: round(v, 2) for k, v in rep.orders.items()})
