"""Degree-N building blocks: Gauss-Legendre nodes, weights and the predictor matrix A.

Every cell of the integrator reuses the same small tables.  This script prints
them for a few degrees and shows the identities they satisfy.
"""
import numpy as np

from aderdg import build_tables, invariant_residuals

np.set_printoptions(precision=6, suppress=True)

# %% Nodes and weights on [0, 1]
for degree in (0, 1, 2):
    t = build_tables(degree)
    print(f"N={degree}: nodes {t.nodes}, weights {t.weights}")

# %% The predictor matrix A = K^{-1} M for N = 2
t = build_tables(2)
print("\nA for N=2:\n", t.A)

# A integrates polynomials of degree < N+1 from 0 to the nodes:
# A @ tau^k = tau^(k+1) / (k+1)
for k in range(3):
    print(f"k={k}: A tau^k - tau^(k+1)/(k+1) =", t.A @ t.nodes ** k - t.nodes ** (k + 1) / (k + 1))

# %% Structural identities, up to the accuracy binary64 allows
for degree in (4, 8):
    res = invariant_residuals(build_tables(degree))
    worst = max(v for k, v in res.items() if k != "min_weight")
    print(f"\nN={degree}: worst identity residual {worst:.1e}")
