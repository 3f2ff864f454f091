"""Adaptive quadrature, quadrature-defined antiderivatives and monotone inversion."""

from __future__ import annotations

import heapq
import math
import threading

import numpy as np
from numpy.polynomial import chebyshev as C

from . import jets as J
from .errors import InversionError, OutOfDomain, SingularPoint, ToleranceNotMet
from .jets import Jet
from .profiles import Interval, Profile

DEFAULT_TOL = 1e-10
MAX_PANELS = 10_000

_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)


def _values(p, x):
    if isinstance(p, Profile):
        return p.jet(x, 0).coeffs[0]
    return np.asarray(p(x), dtype=float)


def _gauss(p, a, b):
    h = 0.5 * (b - a)
    v = _values(p, a + h * (_GL_X + 1.0))
    return h * np.dot(_GL_W, v)


def adaptive_quad(p, a: float, b: float, tol: float = DEFAULT_TOL, max_panels: int = MAX_PANELS) -> float:
    """Integral of ``p`` over ``[a, b]`` by adaptive bisection of 10-point Gauss panels.

    Each panel is compared against the sum over its two halves; the panel
    with the largest discrepancy is split until the summed estimate drops
    below ``tol``.
    """
    a, b = float(a), float(b)
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_quad(p, b, a, tol, max_panels)
    if isinstance(p, Profile):
        if not (p.domain.contains(a, closed=True) and p.domain.contains(b, closed=True)):
            raise OutOfDomain(f"[{a}, {b}] not inside the domain of {p.label}")
        for s in p.singularities:
            if a <= s <= b:
                raise SingularPoint(f"singularity {s} of {p.label} inside [{a}, {b}]")

    def panel(lo, hi):
        whole = _gauss(p, lo, hi)
        mid = 0.5 * (lo + hi)
        halves = _gauss(p, lo, mid) + _gauss(p, mid, hi)
        if not (math.isfinite(whole) and math.isfinite(halves)):
            raise SingularPoint(f"non-finite integrand on [{lo}, {hi}]")
        return abs(halves - whole), halves

    err, val = panel(a, b)
    heap = [(-err, a, b, val)]
    total_err, count = err, 1
    while total_err > tol:
        if count >= max_panels:
            raise ToleranceNotMet(f"quadrature error {total_err:.3g} > {tol:.3g} after {count} panels")
        neg, lo, hi, _ = heapq.heappop(heap)
        total_err += neg
        mid = 0.5 * (lo + hi)
        for x0, x1 in ((lo, mid), (mid, hi)):
            e, v = panel(x0, x1)
            heapq.heappush(heap, (-e, x0, x1, v))
            total_err += e
        count += 1
        # rounding floor: panels narrower than a few ulps cannot improve
        if hi - lo < 64 * np.spacing(max(abs(lo), abs(hi), 1e-300)):
            break
    return float(math.fsum(item[3] for item in heap))


# --------------------------------------------------------------------------
# antiderivatives on a graded lattice of Chebyshev panels

_DU = 0.25
_CHEB_DEG = 32
_MAX_DEPTH = 40


def _logistic(z):
    return 1.0 / (1.0 + np.exp(-z))


class _Lattice:
    """Maps a lattice coordinate u in R onto an interval, graded toward finite ends."""

    def __init__(self, dom: Interval):
        self.dom = dom

    def knot(self, j):
        u = np.asarray(j) * _DU
        lo, hi = self.dom.lo, self.dom.hi
        if self.dom.finite:
            w = hi - lo
            out = np.where(u <= 0, lo + w * _logistic(2 * u), hi - w * _logistic(-2 * u))
        elif math.isfinite(lo):
            out = lo + np.exp(u)
        elif math.isfinite(hi):
            out = hi - np.exp(-u)
        else:
            out = np.sinh(u)
        return float(out) if out.ndim == 0 else out

    def cell(self, r):
        lo, hi = self.dom.lo, self.dom.hi
        with np.errstate(all="ignore"):
            if self.dom.finite:
                u = 0.5 * np.log((r - lo) / (hi - r))
            elif math.isfinite(lo):
                u = np.log(r - lo)
            elif math.isfinite(hi):
                u = -np.log(hi - r)
            else:
                u = np.arcsinh(r)
        j = np.floor(u / _DU).astype(int)
        # guard against rounding at knots
        for _ in range(2):
            left = self.knot(j)
            right = self.knot(j + 1)
            j = np.where(r < left, j - 1, np.where(r >= right, j + 1, j))
        return j


class _Cell:
    __slots__ = ("edges", "coeffs", "prefix", "total")

    def __init__(self, edges, coeffs):
        self.edges = np.asarray(edges)
        self.coeffs = coeffs
        sums = [C.chebval(1.0, c) for c in coeffs]
        self.prefix = np.concatenate([[0.0], np.cumsum(sums)])
        self.total = float(math.fsum(sums))

    def partial(self, r):
        k = np.clip(np.searchsorted(self.edges, r, side="right") - 1, 0, len(self.coeffs) - 1)
        out = np.empty_like(r)
        for i in np.unique(k):
            m = k == i
            a, b = self.edges[i], self.edges[i + 1]
            x = (2 * r[m] - a - b) / (b - a)
            out[m] = self.prefix[i] + C.chebval(x, self.coeffs[i])
        return out


class AntiderivativeProfile(Profile):
    """``F(r) = ∫_basepoint^r p``, with jets ``F^(k) = p^(k-1)`` for k >= 1.

    Values come from piecewise Chebyshev antiderivatives on a fixed lattice
    of cells; cells are built on first use and memoized under a lock.  The
    lattice does not depend on the query order, so memoization never
    changes returned values.
    """

    def __init__(self, integrand: Profile, basepoint: float, label: str | None = None):
        basepoint = float(basepoint)
        if not integrand.domain.contains(basepoint):
            raise OutOfDomain(f"basepoint {basepoint} outside the domain of {integrand.label}")
        if basepoint in integrand.singularities:
            raise SingularPoint(f"basepoint {basepoint} is a singularity of {integrand.label}")
        dom = integrand.domain
        for piece in dom.split(integrand.singularities):
            if piece.contains(basepoint):
                dom = piece
                break
        self.integrand = integrand
        self.basepoint = basepoint
        self._lattice = _Lattice(dom)
        self._cells: dict[int, _Cell] = {}
        self._cum: dict[int, float] = {0: 0.0}
        self._lock = threading.RLock()
        self._base_value = None
        super().__init__(self._evaluate, dom, (), label or f"∫({integrand.label}) from {basepoint:g}")
        self._base_value = float(self._anchored(np.array([basepoint]))[0])

    # panel construction ---------------------------------------------------
    def _fit(self, a, b):
        h = 0.5 * (b - a)
        f = lambda x: self.integrand.jet(a + h * (x + 1.0), 0).coeffs[0]
        c = C.chebinterpolate(f, _CHEB_DEG)
        return c, h

    def _build_cell(self, j):
        a, b = self._lattice.knot(j), self._lattice.knot(j + 1)
        stack = [(a, b, 0)]
        panels = []
        while stack:
            lo, hi, depth = stack.pop()
            c, h = self._fit(lo, hi)
            if not np.all(np.isfinite(c)):
                raise SingularPoint(f"non-finite integrand on [{lo}, {hi}]")
            scale = np.max(np.abs(c))
            tail = np.max(np.abs(c[-4:]))
            # rounding noise in the integrand puts a floor under the tail; a
            # panel bisected a few times without reaching 1e-13 is noise-limited
            if tail <= 1e-13 * scale or scale == 0.0 or (depth >= 6 and tail <= 1e-9 * scale):
                panels.append((lo, hi, C.chebint(c, lbnd=-1) * h))
                continue
            if depth >= _MAX_DEPTH:
                raise ToleranceNotMet(f"integrand of {self.label} unresolved on [{lo}, {hi}]")
            mid = 0.5 * (lo + hi)
            stack.append((mid, hi, depth + 1))
            stack.append((lo, mid, depth + 1))
        panels.sort(key=lambda t: t[0])
        edges = [panels[0][0]] + [p[1] for p in panels]
        return _Cell(edges, [p[2] for p in panels])

    def _cell(self, j):
        cell = self._cells.get(j)
        if cell is None:
            with self._lock:
                cell = self._cells.get(j)
                if cell is None:
                    cell = self._build_cell(j)
                    self._cells[j] = cell
        return cell

    def _cumulative(self, j):
        if j in self._cum:
            return self._cum[j]
        with self._lock:
            return self._walk(j)

    def _walk(self, j):
        step = 1 if j > 0 else -1
        k = j
        while k not in self._cum:
            k -= step
        acc = self._cum[k]
        while k != j:
            if step > 0:
                acc += self._cell(k).total
                k += 1
            else:
                k -= 1
                acc -= self._cell(k).total
            self._cum[k] = acc
        return acc

    def _anchored(self, r):
        out = np.full(r.shape, np.nan)
        ok = self.domain.contains(r)
        if not np.any(ok):
            return out
        rr = r[ok]
        js = self._lattice.cell(rr)
        vals = np.empty_like(rr)
        for j in np.unique(js):
            m = js == j
            vals[m] = self._cumulative(int(j)) + self._cell(int(j)).partial(rr[m])
        out[ok] = vals
        return out

    def _evaluate(self, r, order):
        r = np.asarray(r, dtype=float)
        flat = r.reshape(-1)
        value = (self._anchored(flat) - self._base_value).reshape(r.shape)
        coeffs = np.zeros((order + 1,) + r.shape)
        coeffs[0] = value
        if order >= 1:
            pj = self.integrand.jet(r, order - 1)
            for k in range(1, order + 1):
                coeffs[k] = pj.coeffs[k - 1] / k
        return Jet(coeffs)


def antiderivative(p: Profile, basepoint: float, label: str | None = None) -> AntiderivativeProfile:
    return AntiderivativeProfile(p, basepoint, label)


class InverseProfile(Profile):
    """Inverse of a strictly monotone profile restricted to ``window``.

    Points are located by bisection followed by one Newton step; jets of the
    inverse come from series reversion of the forward jets.
    """

    def __init__(self, forward: Profile, window: Interval, label: str | None = None, xtol: float = 1e-12):
        if not window.finite:
            raise InversionError("inversion window must be finite")
        probe = np.linspace(window.lo, window.hi, 513)
        vals = forward.jet(probe, 0).coeffs[0]
        if not np.all(np.isfinite(vals)):
            raise InversionError(f"{forward.label} is not finite on the inversion window")
        steps = np.diff(vals)
        if not (np.all(steps > 0) or np.all(steps < 0)):
            raise InversionError(f"{forward.label} is not strictly monotone on the window")
        self.forward = forward
        self.window = window
        self.increasing = bool(steps[0] > 0)
        self.xtol = xtol
        order = slice(None) if self.increasing else slice(None, None, -1)
        self._probe_s, self._probe_r = vals[order], probe[order]
        s_lo, s_hi = sorted((vals[0], vals[-1]))
        super().__init__(self._evaluate, Interval(s_lo, s_hi), (), label or f"inverse({forward.label})")

    def locate(self, s):
        """Bracketed search: Newton proposals inside the bracket, bisection otherwise."""
        s = np.asarray(s, dtype=float)
        ps, pr = self._probe_s, self._probe_r
        i = np.clip(np.searchsorted(ps, s), 1, len(ps) - 1)
        a, b = pr[i - 1], pr[i]
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        sign = 1.0 if self.increasing else -1.0
        r = np.interp(s, ps, pr)
        for _ in range(200):
            jet = self.forward.jet(r, 1)
            g = sign * (jet.coeffs[0] - s)
            lo = np.where(g < 0, r, lo)
            hi = np.where(g < 0, hi, r)
            with np.errstate(all="ignore"):
                cand = r - (jet.coeffs[0] - s) / jet.coeffs[1]
            inside = np.isfinite(cand) & (cand > lo) & (cand < hi)
            new = np.where(inside, cand, 0.5 * (lo + hi))
            done = (np.abs(new - r) <= self.xtol * np.maximum(1.0, np.abs(r))) | (hi - lo <= self.xtol * np.maximum(1.0, np.abs(r)))
            r = new
            if np.all(done):
                break
        jet = self.forward.jet(r, 1)
        with np.errstate(all="ignore"):
            step = (jet.coeffs[0] - s) / jet.coeffs[1]
        return np.where(np.isfinite(step), r - step, r)

    def _evaluate(self, s, order):
        s = np.asarray(s, dtype=float)
        r = self.locate(s)
        if order == 0:
            return Jet(r[None])
        if order > 4:
            raise ValueError("inverse jets are available up to order 4")
        fj = self.forward.jet(r, order)
        fj.coeffs[0] = s
        return J.revert(fj, r)
