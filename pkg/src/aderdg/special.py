"""Complete elliptic integral K, Jacobi sn/cn/dn, and the exact pendulum motion.

The second argument of every function is the modulus k (not m = k**2).
"""
from .errors import ConvergenceError, DomainError
from .scalar import FLOAT64

AGM_MAX_ITER = 64


def _agm_ladder(k, field):
    """Rows (a_n, c_n) of the AGM started from (1, sqrt(1 - k^2))."""
    eps = field.eps
    a, b, c = field.scalar(1), field.sqrt(1 - k * k), k
    ladder = [(a, c)]
    for _ in range(AGM_MAX_ITER):
        if abs(c) <= eps * abs(a):
            return ladder
        a, b, c = (a + b) / 2, field.sqrt(a * b), (a - b) / 2
        ladder.append((a, c))
    raise ConvergenceError(f"AGM did not converge for k={float(k)!r}")


def _check_modulus(k):
    if not 0 <= k <= 1:
        raise DomainError(f"modulus must lie in [0, 1], got {float(k)!r}")
    if k == 1:
        raise DomainError("K(k) diverges at k = 1")


def complete_elliptic_k(k, field=FLOAT64):
    """K(k) = pi / (2 AGM(1, sqrt(1 - k^2)))."""
    with field.context():
        k = field.scalar(k)
        _check_modulus(k)
        a, _ = _agm_ladder(k, field)[-1]
        return field.pi / (2 * a)


def jacobi_elliptic(u, k, field=FLOAT64):
    """(sn, cn, dn)(u, k) by the descending Landen / AGM scheme."""
    with field.context():
        u = field.scalar(u)
        k = field.scalar(k)
        _check_modulus(k)
        ladder = _agm_ladder(k, field)
        n = len(ladder) - 1
        phi = 2 ** n * ladder[-1][0] * u
        for a, c in reversed(ladder[1:]):
            phi = (phi + field.asin(c / a * field.sin(phi))) / 2
        sn = field.sin(phi)
        cn = field.cos(phi)
        # dn > 0 for real u and k < 1
        dn = field.sqrt(1 - k * k * sn * sn)
        return sn, cn, dn


def pendulum_exact(t, omega0, phi0, field=FLOAT64):
    """Angle and angular velocity of phi'' + omega0^2 sin(phi) = 0 released at rest from phi0."""
    with field.context():
        phi0 = field.scalar(phi0)
        if not abs(phi0) < field.pi:
            raise DomainError(f"|phi0| must be < pi (no full rotation), got {float(phi0)!r}")
        omega0 = field.scalar(omega0)
        k = field.sin(phi0 / 2)
        sign = 1
        if k < 0:
            k, sign = -k, -1
        arg = complete_elliptic_k(k, field) - omega0 * field.scalar(t)
        sn, cn, dn = jacobi_elliptic(arg, k, field)
        angle = 2 * field.asin(k * sn)
        rate = -2 * omega0 * k * cn * dn / field.sqrt(1 - k * k * sn * sn)
        return sign * angle, sign * rate
