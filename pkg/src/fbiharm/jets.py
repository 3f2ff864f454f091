"""Truncated Taylor (jet) arithmetic.

A :class:`Jet` stores normalized Taylor coefficients ``c[k] = f^(k)(r0)/k!``
for a batch of expansion points at once: ``coeffs`` has shape
``(order + 1, *batch)``.  All arithmetic truncates to the smaller order of
the operands, so a jet built from a variable of order ``n`` carries exact
derivatives up to order ``n`` through any composition of the supported
elementary functions.

Domain violations (log of a non-positive number, division by zero, ...)
are not raised here; they surface as non-finite coefficients that the
profile layer turns into :class:`~fbiharm.errors.SingularPoint`.
"""

from math import factorial

import numpy as np

__all__ = [
    "Jet",
    "sin", "cos", "tan", "cot", "exp", "log", "sqrt", "absolute",
    "arctan", "arccos", "arcsin", "sinh", "cosh", "series_compose", "revert",
]


class Jet:
    __slots__ = ("coeffs",)
    __array_priority__ = 100

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)

    # construction ---------------------------------------------------------
    @classmethod
    def variable(cls, r, order=4):
        r = np.asarray(r, dtype=float)
        c = np.zeros((order + 1,) + r.shape)
        c[0] = r
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, value, order=4, shape=()):
        c = np.zeros((order + 1,) + tuple(shape))
        c[0] = value
        return cls(c)

    @classmethod
    def from_derivatives(cls, derivs):
        """Build a jet from raw derivatives ``[f, f', f'', ...]``."""
        return cls([np.asarray(d, float) / factorial(k) for k, d in enumerate(derivs)])

    # inspection -----------------------------------------------------------
    @property
    def order(self):
        return self.coeffs.shape[0] - 1

    @property
    def shape(self):
        return self.coeffs.shape[1:]

    @property
    def value(self):
        return self.coeffs[0]

    def derivative(self, k):
        """Raw k-th derivative ``k! * c[k]``."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {k}")
        return factorial(k) * self.coeffs[k]

    def derivatives(self):
        return np.stack([self.derivative(k) for k in range(self.order + 1)])

    def isfinite(self):
        return np.all(np.isfinite(self.coeffs), axis=0)

    def truncate(self, order):
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        return Jet(self.coeffs[: order + 1])

    def deriv(self):
        """Jet of the derivative; the order drops by one."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1).reshape((-1,) + (1,) * len(self.shape))
        return Jet(self.coeffs[1:] * k)

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return Jet(self.coeffs[(slice(None),) + idx])

    def __repr__(self):
        return f"Jet(order={self.order}, coeffs={self.coeffs!r})"

    # arithmetic -----------------------------------------------------------
    def __neg__(self):
        return Jet(-self.coeffs)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other, dtype=float)
            shape = (self.order + 1,) + np.broadcast_shapes(self.shape, other.shape)
            c = np.broadcast_to(self.coeffs, shape).copy()
            c[0] = c[0] + other
            return Jet(c)
        n = min(self.order, other.order) + 1
        return Jet(self.coeffs[:n] + other.coeffs[:n])

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * np.asarray(other, float))
        a, b = self.coeffs, other.coeffs
        n = min(self.order, other.order) + 1
        out = np.zeros((n,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]))
        for k in range(n):
            for i in range(k + 1):
                out[k] += a[i] * b[k - i]
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs / np.asarray(other, float))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self):
        a = self.coeffs
        out = np.zeros_like(a)
        with np.errstate(all="ignore"):
            out[0] = 1.0 / a[0]
            for k in range(1, self.order + 1):
                acc = np.zeros_like(a[0])
                for i in range(1, k + 1):
                    acc += a[i] * out[k - i]
                out[k] = -acc * out[0]
        return Jet(out)

    def __pow__(self, exponent):
        if isinstance(exponent, Jet):
            if exponent.order == 0 or np.all(exponent.coeffs[1:] == 0):
                return self.__pow__(exponent.coeffs[0])
            return exp(exponent * log(self))
        e = np.asarray(exponent, dtype=float)
        if e.ndim == 0 and float(e).is_integer() and abs(float(e)) <= 64:
            return self._intpow(int(e))
        return self._realpow(e)

    def __rpow__(self, base):
        return exp(self * np.log(np.asarray(base, dtype=float)))

    def _intpow(self, n):
        if n < 0:
            return self._intpow(-n).reciprocal()
        result = Jet.constant(1.0, self.order, self.shape)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _realpow(self, alpha):
        # a p' = alpha a' p, solved coefficient by coefficient
        a = self.coeffs
        p = np.zeros_like(a)
        with np.errstate(all="ignore"):
            p[0] = np.power(a[0], alpha)
            for k in range(1, self.order + 1):
                acc = np.zeros_like(a[0])
                for j in range(1, k + 1):
                    acc += (alpha * j - (k - j)) * a[j] * p[k - j]
                p[k] = acc / (k * a[0])
        return Jet(p)


def _integrate_chain(u, h, v0):
    """Coefficients of g with g' = h * u' and g(r0) = v0.

    ``h`` must be a jet of order ``u.order - 1`` (or higher).
    """
    a, hc = u.coeffs, h.coeffs
    out = np.zeros_like(a)
    out[0] = v0
    for k in range(1, u.order + 1):
        acc = np.zeros_like(a[0])
        for j in range(1, k + 1):
            acc += j * a[j] * hc[k - j]
        out[k] = acc / k
    return Jet(out)


def _as_jet(u):
    return u if isinstance(u, Jet) else Jet.constant(u, 0, np.shape(u))


def exp(u):
    u = _as_jet(u)
    a = u.coeffs
    e = np.zeros_like(a)
    with np.errstate(all="ignore"):
        e[0] = np.exp(a[0])
        for k in range(1, u.order + 1):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc += j * a[j] * e[k - j]
            e[k] = acc / k
    return Jet(e)


def log(u):
    u = _as_jet(u)
    a = u.coeffs
    out = np.zeros_like(a)
    with np.errstate(all="ignore"):
        out[0] = np.where(a[0] > 0, np.log(np.where(a[0] > 0, a[0], 1.0)), np.nan)
        for k in range(1, u.order + 1):
            acc = np.zeros_like(a[0])
            for j in range(1, k):
                acc += j * out[j] * a[k - j]
            out[k] = (a[k] - acc / k) / a[0]
    return Jet(out)


def _sincos(u):
    a = u.coeffs
    s = np.zeros_like(a)
    c = np.zeros_like(a)
    s[0] = np.sin(a[0])
    c[0] = np.cos(a[0])
    for k in range(1, u.order + 1):
        ss = np.zeros_like(a[0])
        cc = np.zeros_like(a[0])
        for j in range(1, k + 1):
            ss += j * a[j] * c[k - j]
            cc += j * a[j] * s[k - j]
        s[k] = ss / k
        c[k] = -cc / k
    return Jet(s), Jet(c)


def sin(u):
    return _sincos(_as_jet(u))[0]


def cos(u):
    return _sincos(_as_jet(u))[1]


def tan(u):
    s, c = _sincos(_as_jet(u))
    return s / c


def cot(u):
    s, c = _sincos(_as_jet(u))
    return c / s


def sinh(u):
    eu = exp(u)
    return 0.5 * (eu - eu.reciprocal())


def cosh(u):
    eu = exp(u)
    return 0.5 * (eu + eu.reciprocal())


def sqrt(u):
    u = _as_jet(u)
    with np.errstate(all="ignore"):
        bad = u.coeffs[0] < 0
        out = u._realpow(0.5)
    out.coeffs[:, bad] = np.nan
    return out


def absolute(u):
    """|u| on each side of a zero; exactly at a zero the jet is NaN."""
    u = _as_jet(u)
    sgn = np.sign(u.coeffs[0])
    with np.errstate(all="ignore"):
        sgn = np.where(sgn == 0, np.nan, sgn)
    return Jet(u.coeffs * sgn)


def arctan(u):
    u = _as_jet(u)
    with np.errstate(all="ignore"):
        v = u.truncate(max(u.order - 1, 0))
        h = (1.0 + v * v).reciprocal()
        return _integrate_chain(u, h, np.arctan(u.coeffs[0]))


def arcsin(u):
    u = _as_jet(u)
    with np.errstate(all="ignore"):
        v = u.truncate(max(u.order - 1, 0))
        h = (1.0 - v * v) ** -0.5
        val = np.where(np.abs(u.coeffs[0]) <= 1, np.arcsin(np.clip(u.coeffs[0], -1, 1)), np.nan)
        return _integrate_chain(u, h, val)


def arccos(u):
    u = _as_jet(u)
    with np.errstate(all="ignore"):
        v = u.truncate(max(u.order - 1, 0))
        h = -((1.0 - v * v) ** -0.5)
        val = np.where(np.abs(u.coeffs[0]) <= 1, np.arccos(np.clip(u.coeffs[0], -1, 1)), np.nan)
        return _integrate_chain(u, h, val)


def series_compose(outer, inner):
    """Compose the expansion ``outer`` (taken at ``inner.value``) with ``inner``.

    ``outer`` holds coefficients of F in its own variable at the points
    ``inner.value``; the result is the jet of ``F(inner(r))``.
    """
    n = min(outer.order, inner.order)
    delta = Jet(inner.coeffs[: n + 1].copy())
    delta.coeffs[0] = 0.0
    out = Jet.constant(0.0, n, np.broadcast_shapes(outer.shape, inner.shape))
    out.coeffs[0] = outer.coeffs[0]
    power = delta
    for k in range(1, n + 1):
        out = out + power * outer.coeffs[k]
        if k < n:
            power = power * delta
    return out


def revert(s, base):
    """Jet of the inverse map s -> r at ``s.value``, whose value there is ``base``.

    ``s`` is the jet of r -> s at ``base``; only its first-order coefficient
    needs to be non-zero.
    """
    if s.order > 4:
        raise ValueError("series reversion implemented up to order 4")
    a = [s.coeffs[k] for k in range(s.order + 1)]
    b = [None] * (s.order + 1)
    with np.errstate(all="ignore"):
        b[0] = np.broadcast_to(np.asarray(base, float), np.shape(a[0])).copy()
        if s.order >= 1:
            b[1] = 1.0 / a[1]
        if s.order >= 2:
            b[2] = -a[2] / a[1] ** 3
        if s.order >= 3:
            b[3] = (2 * a[2] ** 2 - a[1] * a[3]) / a[1] ** 5
        if s.order >= 4:
            b[4] = (5 * a[1] * a[2] * a[3] - a[1] ** 2 * a[4] - 5 * a[2] ** 3) / a[1] ** 7
    return Jet(np.stack(b))
