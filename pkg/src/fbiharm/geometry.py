"""Tension and bitension of rotationally symmetric maps between warped surfaces.

The domain is ``dr^2 + sigma(r)^2 dtheta^2`` and the target
``drho^2 + lambda(rho)^2 dphi^2``; the map is ``(r, theta) -> (rho(r), k theta)``.
Every quantity is built as a :class:`~fbiharm.profiles.Profile` in ``r`` so
that derivatives come from jet arithmetic instead of finite differences.

All public functions accept a scalar ``r`` (raising on singular points) or
an array (returning NaN where the evaluation is singular).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets as J
from .errors import NonPositiveFactor, OutOfDomain, SingularPoint
from .jets import Jet
from .profiles import Interval, Profile, scalar_or_raise


@dataclass(frozen=True)
class WarpedSurface:
    coord: Interval
    warp: Profile
    label: str = ""


@dataclass(frozen=True)
class RotSymMap:
    source: WarpedSurface
    target: WarpedSurface
    rho: Profile
    k: float

    @property
    def sigma(self) -> Profile:
        return self.source.warp

    @property
    def lam(self) -> Profile:
        return self.target.warp

    @property
    def singularities(self) -> tuple:
        return tuple(sorted(set(self.sigma.singularities) | set(self.rho.singularities)))


@dataclass(frozen=True)
class TensionValue:
    """Components along ``∂/∂rho`` (radial) and ``∂/∂phi`` (angular)."""

    radial: float | np.ndarray
    angular: float | np.ndarray = 0.0


@dataclass(frozen=True)
class ConformalFactor:
    """The function f of the conformal change ``g -> f^{-1} g``.

    ``sign_chart`` lists sub-intervals with the constant sign f takes there.
    Verification uses ``|f|``, which differs from f exactly on the charts
    with sign -1 (``y = x f`` and ``y = -x f`` solve the same linear ODE).
    """

    f: Profile
    sign_chart: tuple = field(default=())

    @classmethod
    def trivial(cls, domain: Interval) -> "ConformalFactor":
        return cls(Profile.constant(1.0, domain, "1"), ((domain, 1),))

    @classmethod
    def from_profile(cls, f: Profile, interval: Interval, zeros=None, n: int = 2048) -> "ConformalFactor":
        """Attach a sign chart found by sign sampling (or from given cut points).

        The chart is split at every sign change, zeros and poles alike.
        """
        if zeros is None:
            from .ode import sign_changes
            zeros = [x for x, _ in sign_changes(f, interval, n)]
        pieces = interval.split(list(zeros) + list(f.singularities))
        chart = []
        for piece in pieces:
            probe = np.linspace(piece.lo, piece.hi, 9)[1:-1]
            vals = f(probe)
            s = np.sign(np.nanmedian(vals))
            chart.append((piece, int(s) if s != 0 else 1))
        return cls(f, tuple(chart))

    @property
    def flips(self) -> list[Interval]:
        return [iv for iv, s in self.sign_chart if s < 0]

    @property
    def effective(self) -> Profile:
        if not self.flips:
            return self.f
        return self.f.map(J.absolute, f"|{self.f.label}|")


# profiles derived from a map -------------------------------------------------

def _target_jets(m: RotSymMap, rho_jet: Jet, n: int):
    """Jets in r of (lambda lambda')(rho(r)) and (lambda lambda')'(rho(r)), order n."""
    L = m.lam.jet(rho_jet.coeffs[0], n + 2)
    LL = L.truncate(n + 1) * L.deriv()
    dLL = LL.deriv()
    return (J.series_compose(LL.truncate(n), rho_jet.truncate(n)),
            J.series_compose(dLL, rho_jet.truncate(n)))


def _map_domain(m: RotSymMap) -> Interval:
    return m.source.coord.intersect(m.rho.domain).intersect(m.sigma.domain)


def tension_profile(m: RotSymMap) -> Profile:
    """``x = rho'' + (sigma'/sigma) rho' - k^2 (lambda lambda')(rho) / sigma^2``."""
    k2 = float(m.k) ** 2

    def fn(r, n):
        P = m.rho.jet(r, n + 2)
        S = m.sigma.jet(r, n + 1)
        LL, _ = _target_jets(m, P, n)
        dP = P.deriv()
        s0 = S.truncate(n)
        return dP.deriv() + S.deriv() / s0 * dP.truncate(n) - k2 * LL / (s0 * s0)

    return Profile(fn, _map_domain(m), m.singularities, "x")


def bitension_profile(m: RotSymMap) -> Profile:
    """Radial bitension ``x'' + (sigma'/sigma) x' - k^2 (lambda lambda')'(rho) x / sigma^2``."""
    x = tension_profile(m)
    k2 = float(m.k) ** 2

    def fn(r, n):
        X = x.jet(r, n + 2)
        S = m.sigma.jet(r, n + 1)
        P = m.rho.jet(r, n)
        _, M = _target_jets(m, P, n)
        dX = X.deriv()
        s0 = S.truncate(n)
        return dX.deriv() + S.deriv() / s0 * dX.truncate(n) - k2 * M / (s0 * s0) * X.truncate(n)

    return Profile(fn, x.domain, x.singularities, "tau2")


def coefficient_profile(m: RotSymMap) -> Profile:
    """``k^2 (lambda lambda')'(rho) / sigma^2``, the zeroth-order coefficient of the linear system."""
    k2 = float(m.k) ** 2

    def fn(r, n):
        S = m.sigma.jet(r, n)
        P = m.rho.jet(r, n)
        _, M = _target_jets(m, P, n)
        return k2 * M / (S * S)

    return Profile(fn, _map_domain(m), m.singularities, "k^2 (lambda lambda')'/sigma^2")


# point operations ------------------------------------------------------------

def _check(m: RotSymMap, r):
    if np.ndim(r) == 0:
        if not _map_domain(m).contains(r):
            raise OutOfDomain(f"r={float(r)} outside the map domain")
        if float(r) in m.singularities:
            raise SingularPoint(f"r={float(r)} is a declared singularity")


def tension_radial(m: RotSymMap, r):
    _check(m, r)
    return scalar_or_raise(tension_profile(m)(r), r, "tension")


def bitension_radial(m: RotSymMap, r):
    _check(m, r)
    return scalar_or_raise(bitension_profile(m)(r), r, "bitension")


def _f_terms(m: RotSymMap, cf: ConformalFactor, r):
    r = np.asarray(r, dtype=float)
    X = tension_profile(m).jet(r, 2)
    S = m.sigma.jet(r, 1)
    F = cf.effective.jet(r, 2)
    tau2 = bitension_profile(m).jet(r, 0).coeffs[0]
    return X, S, F, tau2


def f_bitension(m: RotSymMap, cf: ConformalFactor, r) -> TensionValue:
    """``f tau2 + (Δf) x + 2 f' x'`` with ``Δf = f'' + (sigma'/sigma) f'``; angular part is 0."""
    _check(m, r)
    X, S, F, tau2 = _f_terms(m, cf, r)
    x, dx = X.derivative(0), X.derivative(1)
    f, df, d2f = F.derivative(0), F.derivative(1), F.derivative(2)
    with np.errstate(all="ignore"):
        lap_f = d2f + S.derivative(1) / S.derivative(0) * df
        radial = f * tau2 + lap_f * x + 2 * df * dx
    return TensionValue(scalar_or_raise(radial, r, "f-bitension"), 0.0 if np.ndim(r) == 0 else np.zeros(np.shape(r)))


def conformal_bitension(m: RotSymMap, cf: ConformalFactor, r) -> TensionValue:
    """Bitension of the map from ``(M, f^{-1} g)``.

    ``f^2 (x'' + (sigma'/sigma + 2 (ln f)') x' + (Δ ln f + |grad ln f|^2 - k^2 (λλ')'(ρ)/σ^2) x)``
    """
    _check(m, r)
    r_arr = np.asarray(r, dtype=float)
    F = cf.effective.jet(r_arr, 2)
    if np.ndim(r) == 0 and not float(F.coeffs[0]) > 0:
        raise NonPositiveFactor(f"f({float(r)}) = {float(F.coeffs[0])} is not positive")
    with np.errstate(all="ignore"):
        F = Jet(np.where(F.coeffs[0] > 0, F.coeffs, np.nan))
        lnf = J.log(F)
        X = tension_profile(m).jet(r_arr, 2)
        S = m.sigma.jet(r_arr, 1)
        q = coefficient_profile(m).jet(r_arr, 0).coeffs[0]
        ratio = S.derivative(1) / S.derivative(0)
        l1, l2 = lnf.derivative(1), lnf.derivative(2)
        lap_lnf = l2 + ratio * l1
        f = F.coeffs[0]
        radial = f * f * (X.derivative(2) + (ratio + 2 * l1) * X.derivative(1)
                          + (lap_lnf + l1 * l1 - q) * X.derivative(0))
    return TensionValue(scalar_or_raise(radial, r, "conformal bitension"),
                        0.0 if np.ndim(r) == 0 else np.zeros(np.shape(r)))


def theta_obstruction(m: RotSymMap, r):
    """Coefficient ``k lambda'(rho) x / (sigma^2 lambda)`` multiplying ``f_theta``."""
    _check(m, r)
    r_arr = np.asarray(r, dtype=float)
    x = tension_profile(m).jet(r_arr, 0).coeffs[0]
    rho = m.rho.jet(r_arr, 0).coeffs[0]
    L = m.lam.jet(rho, 1)
    s = m.sigma.jet(r_arr, 0).coeffs[0]
    with np.errstate(all="ignore"):
        out = m.k * L.coeffs[1] * x / (s * s * L.coeffs[0])
    return scalar_or_raise(out, r, "theta obstruction")


def gauss_curvature(s: WarpedSurface, r):
    """``K = -w''/w`` for the warp w of the surface."""
    W = s.warp.jet(np.asarray(r, dtype=float), 2)
    with np.errstate(all="ignore"):
        K = -W.derivative(2) / W.derivative(0)
    return scalar_or_raise(K, r, "Gauss curvature")
