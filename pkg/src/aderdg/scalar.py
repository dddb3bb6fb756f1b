"""Real scalar fields the solver can run in.

Everything numeric in the package goes through one of these objects so the
same code path serves binary64 (numpy float arrays) and extended precision
(numpy object arrays of ``mpmath.mpf``).
"""
import contextlib
import math
import warnings

import mpmath
import numpy as np
import scipy.linalg

from .errors import SingularMatrixError


class Float64Field:
    name = "float64"
    dtype = np.float64
    max_degree = 30
    warn_degree = 20

    @property
    def eps(self):
        return float(np.finfo(np.float64).eps)

    def context(self):
        return contextlib.nullcontext()

    def scalar(self, x):
        return float(x)

    def array(self, x):
        return np.array(x, dtype=np.float64)

    def zeros(self, shape):
        return np.zeros(shape)

    def eye(self, n):
        return np.eye(n)

    @property
    def pi(self):
        return math.pi

    sqrt = staticmethod(np.sqrt)
    exp = staticmethod(np.exp)
    log = staticmethod(np.log)
    sin = staticmethod(np.sin)
    cos = staticmethod(np.cos)
    tan = staticmethod(np.tan)
    asin = staticmethod(np.arcsin)

    def solve(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        n = a.shape[0]
        with warnings.catch_warnings():
            # exact zero pivots are reported below as SingularMatrixError
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
        diag = np.abs(np.diag(lu))
        small = np.flatnonzero(diag <= n * self.eps * max(np.abs(a).max(), 1e-300))
        if small.size:
            raise SingularMatrixError(
                f"matrix is numerically singular at pivot {int(small[0])}", pivot=int(small[0])
            )
        return scipy.linalg.lu_solve((lu, piv), b)

    def __eq__(self, other):
        return isinstance(other, Float64Field)

    def __hash__(self):
        return hash("float64")

    def __repr__(self):
        return "Float64Field()"


def _elementwise(fn):
    ufunc = np.frompyfunc(fn, 1, 1)

    def apply(x):
        if isinstance(x, np.ndarray):
            return ufunc(x)
        return fn(x)

    return apply


class MPField:
    """Extended precision via mpmath; operations must run inside ``context()``."""

    name = "mpmath"
    dtype = object
    max_degree = 200
    warn_degree = 200

    def __init__(self, dps=50):
        self.dps = int(dps)

    @property
    def eps(self):
        with self.context():
            return mpmath.mpf(2) ** (1 - mpmath.mp.prec)

    def context(self):
        return mpmath.workdps(self.dps)

    def scalar(self, x):
        return mpmath.mpf(x)

    def array(self, x):
        arr = np.array(x, dtype=object)
        flat = [self.scalar(v) for v in arr.ravel()]
        out = np.empty(arr.shape, dtype=object)
        out.ravel()[:] = flat if flat else []
        return out.reshape(arr.shape)

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        out.fill(mpmath.mpf(0))
        return out

    def eye(self, n):
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = mpmath.mpf(1)
        return out

    @property
    def pi(self):
        return +mpmath.pi

    sqrt = staticmethod(_elementwise(mpmath.sqrt))
    exp = staticmethod(_elementwise(mpmath.exp))
    log = staticmethod(_elementwise(mpmath.log))
    sin = staticmethod(_elementwise(mpmath.sin))
    cos = staticmethod(_elementwise(mpmath.cos))
    tan = staticmethod(_elementwise(mpmath.tan))
    asin = staticmethod(_elementwise(mpmath.asin))

    def solve(self, a, b):
        # Gaussian elimination with partial pivoting on object arrays.
        a = np.array(a, dtype=object)
        b = np.array(b, dtype=object)
        vector = b.ndim == 1
        if vector:
            b = b[:, None]
        n = a.shape[0]
        scale = max(abs(v) for v in a.ravel()) or mpmath.mpf(1)
        tiny = n * self.eps * scale
        for k in range(n):
            col = [abs(a[i, k]) for i in range(k, n)]
            piv = k + int(np.argmax(col))
            if col[piv - k] <= tiny:
                raise SingularMatrixError(f"matrix is numerically singular at pivot {k}", pivot=k)
            if piv != k:
                a[[k, piv]] = a[[piv, k]]
                b[[k, piv]] = b[[piv, k]]
            factors = a[k + 1:, k] / a[k, k]
            a[k + 1:, k:] -= np.outer(factors, a[k, k:])
            b[k + 1:] -= np.outer(factors, b[k])
        x = self.zeros(b.shape)
        for k in range(n - 1, -1, -1):
            x[k] = (b[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
        return x[:, 0] if vector else x

    def __eq__(self, other):
        return isinstance(other, MPField) and other.dps == self.dps

    def __hash__(self):
        return hash(("mpmath", self.dps))

    def __repr__(self):
        return f"MPField(dps={self.dps})"


FLOAT64 = Float64Field()


def to_float(x):
    """Round any scalar or array from either field to binary64."""
    if isinstance(x, np.ndarray):
        if x.dtype == object:
            return np.array([float(v) for v in x.ravel()]).reshape(x.shape)
        return x.astype(float)
    return float(x)


def max_abs(x):
    x = np.asarray(x)
    if x.size == 0:
        return 0.0
    if x.dtype == object:
        return max(abs(v) for v in x.ravel())
    return float(np.max(np.abs(x)))


def is_finite(x):
    x = np.asarray(x)
    if x.dtype == object:
        return all(mpmath.isfinite(v) for v in x.ravel())
    return bool(np.all(np.isfinite(x)))
