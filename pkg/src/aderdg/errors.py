"""Exception hierarchy shared by all aderdg modules."""


class AderDGError(Exception):
    """Base class for every error raised by this package."""


class RootFindingError(AderDGError):
    def __init__(self, degree, worst_residual):
        self.degree = degree
        self.worst_residual = worst_residual
        super().__init__(
            f"Legendre root finding did not converge for degree {degree} "
            f"(worst residual {float(worst_residual):.3e})"
        )


class SingularMatrixError(AderDGError):
    """Raised when an LU factorisation meets a (numerically) zero pivot."""

    def __init__(self, message, pivot=None, pair=None):
        self.pivot = pivot
        self.pair = pair
        super().__init__(message)


class DegreeTooHighError(AderDGError):
    pass


class ConvergenceError(AderDGError):
    """Nonlinear iteration failed; carries the last iterate and residual norm."""

    def __init__(self, message, iterate=None, residual=None, iterations=None):
        self.iterate = iterate
        self.residual = residual
        self.iterations = iterations
        super().__init__(message)


class NonFiniteError(AderDGError):
    def __init__(self, message, node=None):
        self.node = node
        super().__init__(message)


class DomainError(AderDGError, ValueError):
    """Argument outside the domain of the operation (time, modulus, angle...)."""


class InconsistentInitialError(AderDGError, ValueError):
    pass


class MissingExactSolutionError(AderDGError):
    pass


class InsufficientDataError(AderDGError):
    pass


class UnknownProblemError(AderDGError, KeyError):
    def __init__(self, name, valid):
        self.name = name
        self.valid = tuple(valid)
        super().__init__(f"unknown problem {name!r}; valid names: {', '.join(self.valid)}")

    def __str__(self):
        return self.args[0]
