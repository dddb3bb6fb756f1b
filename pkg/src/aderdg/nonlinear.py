"""Picard / Newton engine shared by the ODE and DAE predictors."""
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvergenceError, SingularMatrixError
from .scalar import FLOAT64, is_finite, max_abs

METHODS = ("picard", "newton")


@dataclass(frozen=True)
class SolverConfig:
    """Iteration settings for the per-cell algebraic systems.

    ``rtol``/``atol``/``fd_step`` left as None resolve against the scalar
    field in use: 1e-13 / 1e-14 / sqrt(eps) at binary64.
    """

    method: str = "picard"
    rtol: float = None
    atol: float = None
    max_iter: int = 100
    fd_step: float = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.rtol is not None and not self.rtol > 0:
            raise ValueError("rtol must be positive")
        if self.atol is not None and not self.atol > 0:
            raise ValueError("atol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    def resolved(self, field=FLOAT64):
        with field.context():
            eps = field.eps
            return replace(
                self,
                rtol=self.rtol if self.rtol is not None else 450 * eps,
                atol=self.atol if self.atol is not None else 45 * eps,
                fd_step=self.fd_step if self.fd_step is not None else field.sqrt(eps),
            )

    def with_method(self, method):
        return replace(self, method=method)


@dataclass
class NonlinearResult:
    x: np.ndarray
    iterations: int
    residual: float


def fd_jacobian(residual, x, r0, step, field=FLOAT64):
    """Forward-difference Jacobian, column step ``step * (1 + |x_j|)``."""
    n = x.size
    jac = field.zeros((r0.size, n))
    for j in range(n):
        h = step * (1 + abs(x[j]))
        xh = x.copy()
        xh[j] = xh[j] + h
        h = xh[j] - x[j]
        jac[:, j] = (residual(xh) - r0) / h
    return jac


def solve_nonlinear(residual, initial, cfg=None, *, scale=0, field=FLOAT64):
    """Drive ``residual(x)`` to zero.

    Converged when ``max|residual| <= rtol * (1 + scale) + atol``, or, for
    Newton, when the update is below ``rtol * (1 + max|x|) + atol``.  Picard mode
    assumes the fixed-point form ``residual(x) = x - g(x)`` and iterates
    ``x <- x - residual(x)``; Newton mode uses a finite-difference Jacobian.
    At least one update is always taken.  Three consecutive increases of the residual abort with ConvergenceError.
    """
    cfg = (cfg or SolverConfig()).resolved(field)
    with field.context():
        x = field.array(initial).ravel().copy()
        tol = cfg.rtol * (1 + scale) + cfg.atol
        r = residual(x)
        norm = max_abs(r)
        growth = 0
        for it in range(cfg.max_iter + 1):
            if not is_finite(r):
                raise ConvergenceError("residual became non-finite", iterate=x,
                                       residual=norm, iterations=it)
            # the guess is never accepted untouched: for stiff, tiny states it can
            # sit under the absolute tolerance while being far from the solution
            if it > 0 and norm <= tol:
                return NonlinearResult(x, it, norm)
            if it == cfg.max_iter:
                break
            if cfg.method == "picard":
                x = x - r
            else:
                jac = fd_jacobian(residual, x, r, cfg.fd_step, field)
                try:
                    delta = field.solve(jac, r)
                except SingularMatrixError as exc:
                    raise SingularMatrixError(
                        f"singular Jacobian at pivot {exc.pivot} (iteration {it})",
                        pivot=exc.pivot,
                    ) from exc
                x = x - delta
                # step test: accepts iterates whose residual is stuck at a rounding floor
                if max_abs(delta) <= cfg.rtol * (1 + max_abs(x)) + cfg.atol:
                    r = residual(x)
                    if is_finite(r):
                        return NonlinearResult(x, it + 1, max_abs(r))
            r = residual(x)
            new_norm = max_abs(r)
            growth = growth + 1 if new_norm > norm else 0
            norm = new_norm
            if growth >= 3:
                raise ConvergenceError(
                    f"{cfg.method} iteration diverging (residual {float(norm):.3e} "
                    f"after {it + 1} iterations)",
                    iterate=x, residual=norm, iterations=it + 1,
                )
        raise ConvergenceError(
            f"{cfg.method} iteration did not converge in {cfg.max_iter} iterations "
            f"(residual {float(norm):.3e}, tolerance {float(tol):.3e})",
            iterate=x, residual=norm, iterations=cfg.max_iter,
        )
