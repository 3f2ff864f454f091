"""Scalar functions of one real variable that expose Taylor jets.

A :class:`Profile` wraps a vectorized jet evaluator ``fn(r, order) -> Jet``
together with its domain and the interior points where it is known to be
singular.  Profiles support pointwise arithmetic, composition and
differentiation; every derived profile is again a profile, so geometric
quantities such as the tension coefficient are ordinary profiles too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import jets as J
from .errors import OutOfDomain, SingularPoint
from .jets import Jet

DEFAULT_EXCLUSION = 1e-2


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)``.  Infinite ends are allowed for domains."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise ValueError(f"invalid interval ({self.lo}, {self.hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        if self.finite:
            return 0.5 * (self.lo + self.hi)
        if math.isfinite(self.lo):
            return self.lo + 1.0
        if math.isfinite(self.hi):
            return self.hi - 1.0
        return 0.0

    def contains(self, r, closed=False):
        r = np.asarray(r, dtype=float)
        if closed:
            return (r >= self.lo) & (r <= self.hi)
        return (r > self.lo) & (r < self.hi)

    def shrink(self, eps: float) -> "Interval":
        return Interval(self.lo + eps, self.hi - eps)

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def split(self, points, eps: float = 0.0) -> list["Interval"]:
        """Sub-intervals between the given interior points, each shrunk by eps."""
        cuts = sorted(p for p in points if self.lo < p < self.hi)
        edges = [self.lo, *cuts, self.hi]
        out = []
        for a, b in zip(edges[:-1], edges[1:]):
            a2 = a + eps if a != self.lo else a
            b2 = b - eps if b != self.hi else b
            if a2 < b2:
                out.append(Interval(a2, b2))
        return out

    def as_tuple(self):
        return (self.lo, self.hi)


REAL_LINE = Interval(-math.inf, math.inf)

JetFn = Callable[[np.ndarray, int], Jet]


class Profile:
    """A scalar function with Taylor jets of arbitrary order.

    Parameters
    ----------
    fn : callable
        ``fn(r, order)`` returning a :class:`Jet` of the requested order at the
        array of points ``r``.  Non-finite coefficients mark singular points.
    domain : Interval
    singularities : sequence of float
        Interior points to stay away from.
    label : str
    """

    def __init__(self, fn: JetFn, domain: Interval = REAL_LINE, singularities=(), label: str = ""):
        self._fn = fn
        self.domain = domain
        self.singularities = tuple(sorted(float(s) for s in singularities))
        self.label = label

    @classmethod
    def from_expr(cls, expr: Callable[[Jet], Jet], domain: Interval = REAL_LINE,
                  singularities=(), label: str = "") -> "Profile":
        """Profile from a function written in jet arithmetic, e.g. ``lambda r: J.sin(r)``."""
        def fn(r, order):
            with np.errstate(all="ignore"):
                out = expr(Jet.variable(r, order))
            if not isinstance(out, Jet):
                out = Jet.constant(out, order, np.shape(r))
            if out.shape != np.shape(r):
                out = Jet(np.broadcast_to(out.coeffs, (out.order + 1,) + np.shape(r)).copy())
            return out
        return cls(fn, domain, singularities, label)

    @classmethod
    def constant(cls, value: float, domain: Interval = REAL_LINE, label: str = "") -> "Profile":
        return cls(lambda r, order: Jet.constant(value, order, np.shape(r)), domain, (),
                   label or repr(float(value)))

    def __repr__(self):
        return f"Profile({self.label!r}, domain=({self.domain.lo}, {self.domain.hi}))"

    # evaluation -----------------------------------------------------------
    def jet(self, r, order: int = 4) -> Jet:
        """Vectorized jets; singular points come back as NaN, never raise."""
        r = np.asarray(r, dtype=float)
        with np.errstate(all="ignore"):
            out = self._fn(r, order)
        if out.order < order:
            raise ValueError(f"{self.label}: evaluator returned order {out.order} < {order}")
        out = out.truncate(order)
        bad = ~out.isfinite() | ~self.domain.contains(r)
        if np.any(bad):
            out = Jet(np.where(bad, np.nan, out.coeffs))
        return out

    def __call__(self, r):
        v = self.jet(r, 0).coeffs[0]
        return float(v) if np.ndim(v) == 0 else v

    def d(self, r, k: int = 1):
        """Raw k-th derivative at r."""
        v = self.jet(r, k).derivative(k)
        return float(v) if np.ndim(v) == 0 else v

    def near_singularity(self, r, exclusion: float = DEFAULT_EXCLUSION):
        r = np.asarray(r, dtype=float)
        mask = np.zeros(r.shape, dtype=bool)
        for s in self.singularities:
            mask |= np.abs(r - s) < exclusion
        return mask

    # algebra --------------------------------------------------------------
    def _binary(self, other, op, sym):
        if isinstance(other, Profile):
            dom = _intersect(self.domain, other.domain)
            sing = self.singularities + other.singularities
            label = f"({self.label}){sym}({other.label})"
            return Profile(lambda r, n: op(self.jet(r, n), other.jet(r, n)), dom, sing, label)
        c = float(other)
        return Profile(lambda r, n: op(self.jet(r, n), c), self.domain, self.singularities,
                       f"({self.label}){sym}{c!r}")

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b, "-")

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b, "/")

    def __rtruediv__(self, other):
        return self.map(lambda u: float(other) / u, f"{float(other)!r}/({self.label})")

    def __pow__(self, other):
        return self._binary(other, lambda a, b: a ** b, "^")

    def __neg__(self):
        return Profile(lambda r, n: -self.jet(r, n), self.domain, self.singularities, f"-({self.label})")

    def map(self, g: Callable[[Jet], Jet], label: str | None = None) -> "Profile":
        """Pointwise jet function applied to this profile, e.g. ``p.map(J.log)``."""
        return Profile(lambda r, n: g(self.jet(r, n)), self.domain, self.singularities,
                       label or f"g({self.label})")

    def deriv(self) -> "Profile":
        return Profile(lambda r, n: self.jet(r, n + 1).deriv(), self.domain, self.singularities,
                       f"d({self.label})")

    def compose(self, inner: "Profile") -> "Profile":
        """``self ∘ inner``: ``r -> self(inner(r))``."""
        outer = self

        def fn(r, n):
            u = inner.jet(r, n)
            return J.series_compose(outer.jet(u.coeffs[0], n), u)

        return Profile(fn, inner.domain, inner.singularities, f"{outer.label}∘({inner.label})")

    def with_singularities(self, points, label: str | None = None) -> "Profile":
        return Profile(self._fn, self.domain, tuple(points), label or self.label)

    def restrict(self, domain: Interval) -> "Profile":
        return Profile(self._fn, _intersect(self.domain, domain), self.singularities, self.label)


def _intersect(a: Interval, b: Interval) -> Interval:
    return Interval(max(a.lo, b.lo), min(a.hi, b.hi))


def jet_eval(p: Profile, r: float, order: int = 4, exclusion: float = 0.0) -> Jet:
    """Jet of ``p`` at the scalar ``r``, raising on domain or singularity trouble."""
    r = float(r)
    if not p.domain.contains(r):
        raise OutOfDomain(f"{p.label}: r={r} outside ({p.domain.lo}, {p.domain.hi})")
    for s in p.singularities:
        if abs(r - s) <= exclusion or r == s:
            raise SingularPoint(f"{p.label}: r={r} within {exclusion} of singularity {s}")
    out = p.jet(r, order)
    if not np.all(np.isfinite(out.coeffs)):
        raise SingularPoint(f"{p.label}: non-finite jet at r={r}")
    return out


def scalar_or_raise(values, r, what: str = "value"):
    """Return a float for scalar input (raising on NaN) or the array unchanged."""
    if np.ndim(r) == 0:
        v = float(np.asarray(values))
        if not math.isfinite(v):
            raise SingularPoint(f"{what} is not finite at r={float(r)}")
        return v
    return np.asarray(values)


def fd_derivative(p: Profile, r, h: float | None = None):
    """Central-difference first derivative of the profile values (O(h^4) stencil).

    The default step shrinks with the distance to the nearest domain end or
    declared singularity, where derivatives grow.
    """
    r = np.asarray(r, dtype=float)
    if h is None:
        ends = [e for e in (p.domain.lo, p.domain.hi, *p.singularities) if math.isfinite(e)]
        dist = np.min([np.abs(r - e) for e in ends], axis=0) if ends else np.inf
        h = 1e-3 * np.minimum(np.maximum(1.0, np.abs(r)), dist)
    f = lambda x: p.jet(x, 0).coeffs[0]
    return (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h)


def fd_consistency(p: Profile, points) -> float:
    """Worst ``|d1 - fd| / (1 + |d1|)`` over the points (NaNs ignored)."""
    d1 = p.jet(points, 1).derivative(1)
    fd = fd_derivative(p, points)
    err = np.abs(d1 - fd) / (1.0 + np.abs(d1))
    return float(np.nanmax(err))


# built-in profiles ------------------------------------------------------------
OPEN_0_PI = Interval(0.0, math.pi)
POSITIVE = Interval(0.0, math.inf)


def identity(domain: Interval = REAL_LINE) -> Profile:
    return Profile(lambda r, n: Jet.variable(r, n), domain, (), "r")


def sine(domain: Interval = REAL_LINE) -> Profile:
    return Profile.from_expr(J.sin, domain, (), "sin(r)")


def cosine(domain: Interval = REAL_LINE) -> Profile:
    return Profile.from_expr(J.cos, domain, (), "cos(r)")


def log_tan_half(domain: Interval = OPEN_0_PI) -> Profile:
    """``t(r) = ln tan(r/2)``: the coordinate with ``dt = dr / sin r``."""
    return Profile.from_expr(lambda r: J.log(J.tan(r / 2)), domain, (), "ln(tan(r/2))")


def sqrt_profile(domain: Interval = POSITIVE) -> Profile:
    return Profile.from_expr(J.sqrt, domain, (), "sqrt(r)")


BUILTINS: dict[str, Callable[[], Profile]] = {
    "identity": lambda: identity(Interval(-10.0, 10.0)),
    "sin": lambda: sine(OPEN_0_PI),
    "cos": lambda: cosine(OPEN_0_PI),
    "ln_tan_half": log_tan_half,
    "sqrt": sqrt_profile,
}
