"""Arbitrary high order one-step time integration with a local discontinuous
Galerkin predictor, for ODEs and semi-explicit index-1 DAEs."""
from .basis import BasisTables, build_tables, dump_tables, invariant_residuals, legendre_nodes
from .dae import (DaeProblem, DaeTrajectory, constraint_residuals, dae_integrate,
                  eval_improved_differential, eval_local_algebraic, solve_epsilon_embedded)
from .errors import (AderDGError, ConvergenceError, DegreeTooHighError, DomainError,
                     InconsistentInitialError, InsufficientDataError, MissingExactSolutionError,
                     NonFiniteError, RootFindingError, SingularMatrixError, UnknownProblemError)
from .local import eval_improved, eval_local, locate, tabulate
from .nonlinear import SolverConfig, solve_nonlinear
from .ode import Grid, OdeProblem, SolutionTrajectory, integrate, node_update, predictor_solve
from .scalar import FLOAT64, MPField
from .special import complete_elliptic_k, jacobi_elliptic, pendulum_exact
from .testbed import (ConvergenceReport, GlobalErrors, builtin_problem, convergence_study,
                      fit_order, global_errors, local_errors)

__version__ = "0.1.0"
