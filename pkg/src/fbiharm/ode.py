"""Linear second-order ODEs and the constructions built on them.

Covers the assembled system ``y'' + (σ'/σ) y' - k²(λλ')'(ρ)/σ² y = 0``, the
``t = ∫ dr/σ`` substitution, reduction of order, the Cauchy–Euler and
polynomial-in-``ln tan(r/2)`` families, the Riccati form of the double-wrap
problem and the two ansatz solutions on the round sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.optimize

from . import jets as J
from .errors import NonBiharmonicInput, SingularPoint, StepFailure, XVanishes
from .geometry import ConformalFactor, RotSymMap, bitension_profile, coefficient_profile, tension_profile
from .jets import Jet
from .profiles import (DEFAULT_EXCLUSION, OPEN_0_PI, POSITIVE, REAL_LINE, Interval, Profile,
                       jet_eval, scalar_or_raise)
from .quadrature import InverseProfile, antiderivative

SOLVER_TOL = 1e-10
SCAN_POINTS = 2048
MAX_RHS_CALLS = 200_000


@dataclass(frozen=True)
class LinearODE2:
    """``y'' + p(r) y' + q(r) y = 0`` on ``domain``."""

    p: Profile
    q: Profile
    domain: Interval
    label: str = ""

    def residual(self, y: Profile, r):
        """``y'' + p y' + q y`` evaluated with jets of y."""
        r_arr = np.asarray(r, dtype=float)
        Y = y.jet(r_arr, 2)
        with np.errstate(all="ignore"):
            out = Y.derivative(2) + self.p.jet(r_arr, 0).coeffs[0] * Y.derivative(1) \
                + self.q.jet(r_arr, 0).coeffs[0] * Y.derivative(0)
        return scalar_or_raise(out, r, "ODE residual")

    def coefficient_values(self, r):
        """``(p(r), q(r))`` at a scalar point; used by the integrator."""
        r = np.asarray(r, dtype=float)
        return float(self.p.jet(r, 0).coeffs[0]), float(self.q.jet(r, 0).coeffs[0])


@dataclass(frozen=True)
class _TSystem(LinearODE2):
    """Transformed system that inverts ``t(r)`` once per coefficient evaluation."""

    r_of_t: Profile = None
    p_r: Profile = None
    q_r: Profile = None

    def coefficient_values(self, t):
        r = self.r_of_t.jet(np.asarray(t, dtype=float), 0).coeffs[0]
        return float(self.p_r.jet(r, 0).coeffs[0]), float(self.q_r.jet(r, 0).coeffs[0])


def assemble_system(m: RotSymMap) -> LinearODE2:
    """The linear system satisfied by ``y = f x``."""
    S = m.sigma
    p = S.deriv() / S
    q = -coefficient_profile(m)
    dom = m.source.coord.intersect(m.rho.domain).intersect(S.domain)
    return LinearODE2(p.with_singularities(m.singularities, "σ'/σ"),
                      q.with_singularities(m.singularities, "-k²(λλ')'(ρ)/σ²"), dom, "assembled")


# t-substitution -----------------------------------------------------------------

@dataclass(frozen=True)
class TCoordinates:
    """A system rewritten in ``t = ∫_basepoint^r dσ⁻¹`` with the coordinate maps."""

    system: LinearODE2
    t_of_r: Profile
    r_of_t: Profile
    basepoint: float


def to_t_coordinates(sys: LinearODE2, sigma: Profile | RotSymMap, window: Interval | None = None,
                     basepoint: float | None = None) -> TCoordinates:
    """Substitute ``dt = dr/σ``.

    The new coefficients are ``p̃ = σ p - σ'`` and ``q̃ = σ² q`` composed with
    ``r(t)``; for the assembled system ``p̃`` vanishes identically.
    """
    if isinstance(sigma, RotSymMap):
        sigma = sigma.sigma
    if window is None:
        window = sys.domain if sys.domain.finite else None
        if window is None:
            raise ValueError("an infinite domain needs an explicit finite window")
        window = window.shrink(DEFAULT_EXCLUSION)
    if basepoint is None:
        basepoint = window.midpoint
    t_of_r = antiderivative((1.0 / sigma).restrict(sys.domain), basepoint, "t(r)")
    r_of_t = InverseProfile(t_of_r, window, "r(t)")
    p_r = sigma * sys.p - sigma.deriv()
    q_r = sigma * sigma * sys.q
    p_t, q_t = p_r.compose(r_of_t), q_r.compose(r_of_t)
    new = _TSystem(Profile(p_t._fn, r_of_t.domain, (), "p(t)"), Profile(q_t._fn, r_of_t.domain, (), "q(t)"),
                   r_of_t.domain, f"{sys.label} in t", r_of_t, p_r, q_r)
    return TCoordinates(new, t_of_r, r_of_t, float(basepoint))


# initial value problems -----------------------------------------------------------

def _taylor_from_ode(y, dy, P: Jet, Q: Jet, order: int) -> Jet:
    """Normalized Taylor coefficients of a solution from its value and slope."""
    shape = np.shape(y)
    c = np.zeros((order + 1,) + shape)
    c[0] = y
    if order >= 1:
        c[1] = dy
    for k in range(order - 1):
        acc = np.zeros(shape)
        for i in range(k + 1):
            acc = acc + P.coeffs[i] * (k - i + 1) * c[k - i + 1] + Q.coeffs[i] * c[k - i]
        c[k + 2] = -acc / ((k + 2) * (k + 1))
    return Jet(c)


@dataclass(frozen=True)
class ODESolution:
    """Dense solution of an initial value problem; ``y`` is a Profile with full jets."""

    y: Profile
    system: LinearODE2
    r0: float
    y0: float
    dy0: float
    interval: Interval
    tol: float

    def __call__(self, r):
        return self.y(r)

    def derivative(self, r):
        return self.y.d(r, 1)

    def residual(self, r):
        return self.system.residual(self.y, r)


def solve_ivp(sys: LinearODE2, r0: float, y0: float, dy0: float, target: Interval,
              tol: float = SOLVER_TOL) -> ODESolution:
    """Integrate from ``r0`` to both ends of ``target`` with DOP853 dense output.

    Higher jets of the solution come from the Taylor recurrence of the ODE, so
    ``y''`` satisfies the equation exactly at every returned point.
    """
    r0 = float(r0)
    if not target.finite:
        raise ValueError("target interval must be finite")
    if not target.contains(r0, closed=True):
        raise ValueError(f"r0={r0} outside the target interval")
    for s in list(sys.p.singularities) + list(sys.q.singularities):
        if target.lo <= s <= target.hi:
            raise StepFailure(f"declared singularity {s} inside the target interval")
    for c in (sys.p, sys.q):
        poles = [x for x, kind in sign_changes(c, target, 256) if kind == "pole"]
        if poles:
            raise StepFailure(f"coefficient {c.label or ''} has a pole near {poles[0]:.6g}")
    calls = [0]

    def rhs(r, u):
        calls[0] += 1
        if calls[0] > MAX_RHS_CALLS:
            raise StepFailure(f"step size collapsed near r = {r:.6g}")
        P, Q = sys.coefficient_values(r)
        return np.array([u[1], -P * u[1] - Q * u[0]])

    pieces = []
    for end in (target.lo, target.hi):
        if end == r0:
            continue
        res = scipy.integrate.solve_ivp(rhs, (r0, end), [y0, dy0], method="DOP853", rtol=tol,
                                        atol=tol * 1e-2, dense_output=True)
        if res.status != 0 or not np.all(np.isfinite(res.y)):
            raise StepFailure(f"integration from {r0} to {end} failed: {res.message}")
        pieces.append((min(r0, end), max(r0, end), res.sol))

    def fn(r, n):
        r = np.asarray(r, dtype=float)
        flat = r.reshape(-1)
        vals = np.full((2, flat.size), np.nan)
        for lo, hi, sol in pieces:
            m = (flat >= lo) & (flat <= hi) & np.isnan(vals[0])
            if np.any(m):
                vals[:, m] = sol(flat[m])
        y, dy = vals[0].reshape(r.shape), vals[1].reshape(r.shape)
        if n <= 1:
            c = np.stack([y, dy])[: n + 1]
            return Jet(c)
        P = sys.p.jet(r, n - 2)
        Q = sys.q.jet(r, n - 2)
        return _taylor_from_ode(y, dy, P, Q, n)

    # the solution is defined on the closed interval; widen the open domain by one ulp
    closed = Interval(np.nextafter(target.lo, -np.inf), np.nextafter(target.hi, np.inf))
    prof = Profile(fn, closed, (), "y")
    return ODESolution(prof, sys, r0, float(y0), float(dy0), target, tol)


# zeros and sign changes -----------------------------------------------------------

def sign_changes(p: Profile, interval: Interval, n: int = SCAN_POINTS):
    """Sign changes of p on a uniform scan, refined by Brent's method.

    Returns ``[(point, kind)]`` with kind ``"zero"`` or ``"pole"``.
    """
    lo, hi = interval.lo, interval.hi
    xs = np.linspace(lo, hi, n + 2)[1:-1]
    vs = p.jet(xs, 0).coeffs[0]
    f = lambda x: float(p.jet(np.asarray(x), 0).coeffs[0])

    def g(x):
        # a non-finite value inside the bracket can only be the pole itself
        v = f(x)
        return v if math.isfinite(v) else 0.0
    scale = float(np.nanmedian(np.abs(vs))) if np.any(np.isfinite(vs)) else 1.0
    out = []
    for i in range(len(xs) - 1):
        a, b = vs[i], vs[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a == 0.0:
            out.append((float(xs[i]), "zero"))
            continue
        if a * b < 0:
            root = scipy.optimize.brentq(g, xs[i], xs[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps)
            with np.errstate(all="ignore"):
                near = max(abs(f(root - 1e-9)), abs(f(root + 1e-9)))
            kind = "zero" if near <= 1e-6 * max(1.0, scale) else "pole"
            out.append((float(root), kind))
    return out


def locate_zeros(p: Profile, interval: Interval, n: int = SCAN_POINTS) -> list[float]:
    """Zeros of p (sign changes that are not poles) on the interval."""
    return [x for x, kind in sign_changes(p, interval, n) if kind == "zero"]


# reduction of order ---------------------------------------------------------------

def _default_window(m: RotSymMap) -> Interval:
    dom = m.source.coord.intersect(m.rho.domain)
    if not dom.finite:
        raise ValueError("pass a finite working interval")
    return dom.shrink(DEFAULT_EXCLUSION)


def reduction_of_order_factor(m: RotSymMap, C1: float, C2: float, basepoint: float | None = None,
                              interval: Interval | None = None, bitension_tol: float = 1e-6) -> ConformalFactor:
    """``f = C1 + C2 ∫_basepoint x⁻² σ⁻¹ dr`` for a biharmonic map with nowhere-zero tension x."""
    if C1 == 0 and C2 == 0:
        raise ValueError("C1 and C2 must not both vanish")
    interval = interval or _default_window(m)
    if basepoint is None:
        basepoint = interval.midpoint
    x = tension_profile(m)
    xs = np.linspace(interval.lo, interval.hi, SCAN_POINTS)
    xv = x(xs)
    finite = np.isfinite(xv)
    if np.any(np.abs(xv[finite]) < 1e-8) or np.any(np.diff(np.sign(xv[finite])) != 0):
        raise XVanishes("the tension vanishes on the working interval")
    X = x.jet(xs, 2)
    tau2 = bitension_profile(m)(xs)
    # pointwise size of the jets τ₂ is built from, as in the verifier
    scale = 1.0 + np.abs(X.derivative(0)) + np.abs(X.derivative(2)) + np.abs(m.rho.jet(xs, 4).derivative(4))
    worst = np.nanmax(np.abs(tau2) / scale)
    if not worst <= bitension_tol:
        raise NonBiharmonicInput(f"normalized bitension {worst:.3g} exceeds {bitension_tol:g}")
    integrand = (x ** -2 / m.sigma).restrict(interval)
    if C2 == 0:
        f = Profile.constant(float(C1), interval, repr(float(C1)))
        return ConformalFactor(f, ((interval, 1 if C1 > 0 else -1),))
    G = antiderivative(integrand, basepoint, f"∫x⁻²σ⁻¹ from {basepoint:g}")
    f = float(C2) * G + float(C1)
    f = Profile(f._fn, interval, (), f"{C1:g} + {C2:g}·∫x⁻²σ⁻¹")
    return ConformalFactor.from_profile(f, interval)


# closed-form families ---------------------------------------------------------------

def dilog_term(basepoint: float = 1.0) -> Profile:
    """``∫_basepoint^r ln(1+s²)/s ds`` on (0, ∞) by quadrature."""
    integrand = Profile.from_expr(lambda s: J.log(1 + s * s) / s, POSITIVE, (), "ln(1+r²)/r")
    return antiderivative(integrand, basepoint, "∫ln(1+r²)/r")


def cauchy_euler_rho(k: float, C1: float, C2: float, C3: float, C4: float) -> Profile:
    """General radial profile making the sphere-to-``dρ²+ρdφ²`` map biharmonic (variable r on (0, ∞))."""
    k2 = float(k) ** 2

    def closed(r):
        L = J.log(r)
        L1 = J.log(1 + r * r)
        return (C1 + (C2 - 2 * C3) * L + C3 * L1 + C4 * L * L1 + (k2 / 4) * L * L)

    rho = Profile.from_expr(closed, POSITIVE, (), "ρ (closed part)")
    if C4 != 0:
        rho = rho - 2.0 * C4 * dilog_term(1.0)
    return Profile(rho._fn, POSITIVE, (), f"cauchy_euler_rho(k={k:g}, C=({C1:g},{C2:g},{C3:g},{C4:g}))")


def prop212_polynomial(k: float, C1: float, C2: float, C3: float, C4: float):
    """Coefficients (ascending) of the degree-7 polynomial ρ(t)."""
    k2 = float(k) ** 2
    return (C4, C3, C1 / 2 + k2 / 4, C2 / 6, C1 / 6, C2 / 10, C1 / 30, C2 / 42)


def prop212_rho(k: float, C1: float, C2: float, C3: float, C4: float) -> Profile:
    """ρ as a polynomial in ``t = ln tan(r/2)`` on (0, π)."""
    coeffs = prop212_polynomial(k, C1, C2, C3, C4)

    def expr(r):
        t = J.log(J.tan(r / 2))
        acc = coeffs[-1] + 0 * t
        for c in reversed(coeffs[:-1]):
            acc = acc * t + c
        return acc

    return Profile.from_expr(expr, OPEN_0_PI, (), f"prop212_rho(k={k:g})")


# Riccati form -----------------------------------------------------------------------

def riccati_residual(beta: Profile, r):
    """``β'' + (3 cot r - 2 tan r) β' + 2 β'² + 1 - 4 sin² r``."""
    if np.ndim(r) == 0:
        if float(r) == math.pi / 2:
            raise SingularPoint("r = π/2 is a pole of tan r")
        B = jet_eval(beta, r, 2)
    else:
        B = beta.jet(np.asarray(r, dtype=float), 2)
    r_arr = np.asarray(r, dtype=float)
    b1, b2 = B.derivative(1), B.derivative(2)
    with np.errstate(all="ignore"):
        out = b2 + (3 / np.tan(r_arr) - 2 * np.tan(r_arr)) * b1 + 2 * b1 * b1 + 1 - 4 * np.sin(r_arr) ** 2
    return scalar_or_raise(out, r, "Riccati residual")


# ansatz solutions on the round sphere ------------------------------------------------

SQRT3 = math.sqrt(3.0)


def kzt_system() -> np.ndarray:
    """Matrix of the 3x3 homogeneous system for ``(a0, a1, a2)``."""
    return np.array([
        [2 * (2 - SQRT3), SQRT3 + 1, 0.0],
        [2 * (2 - SQRT3), 2.0, 2 * (2 + SQRT3)],
        [0.0, 1 - SQRT3, 2 * (2 + SQRT3)],
    ])


def kzt_ansatz_coeffs():
    """Solution of the ansatz system normalized by ``a2 = 1``.

    With ``a2`` fixed the system is three consistent equations in two
    unknowns; least squares returns the exact solution up to rounding.
    """
    A = kzt_system()
    sol = np.linalg.lstsq(A[:, :2], -A[:, 2], rcond=None)[0]
    return float(sol[0]), float(sol[1]), 1.0


def kzt_q(k2: float = 3.0) -> Profile:
    """``-k²(e^{4t} - 6e^{2t} + 1)/(1 + e^{2t})²``, i.e. ``-k² cos(4 arctan e^t)``."""
    return Profile.from_expr(lambda t: -k2 * (J.exp(4 * t) - 6 * J.exp(2 * t) + 1) / (1 + J.exp(2 * t)) ** 2,
                             REAL_LINE, (), f"-{k2:g} cos(4 arctan e^t)")


def kzt_solution(coeffs=None) -> Profile:
    """``y(t) = e^{√3 t} (a0 + a1 e^{2t} + a2 e^{4t}) / (1 + e^{2t})²``."""
    a0, a1, a2 = coeffs or kzt_ansatz_coeffs()
    return Profile.from_expr(
        lambda t: J.exp(SQRT3 * t) * (a0 + a1 * J.exp(2 * t) + a2 * J.exp(4 * t)) / (1 + J.exp(2 * t)) ** 2,
        REAL_LINE, (), "y_kzt(t)")


def kztt_amplitude_phase(basepoint: float = 0.0):
    """Amplitude ``u = sqrt((1+e^{2t})/e^t)`` and phase ``v = ∫ √3/u²`` (v(0) = 0)."""
    u = Profile.from_expr(lambda t: J.sqrt((1 + J.exp(2 * t)) / J.exp(t)), REAL_LINE, (), "u(t)")
    vp = Profile(lambda t, n: SQRT3 / (u.jet(t, n) ** 2), REAL_LINE, (), "√3/u²")
    v = antiderivative(vp, basepoint, "v(t)")
    return u, v


def kztt_residual(u: Profile, v: Profile, t):
    """First amplitude equation ``u'' - (v'² + ¼(e^{4t} - 6e^{2t} + 1)/(1+e^{2t})²) u``."""
    t_arr = np.asarray(t, dtype=float)
    U = u.jet(t_arr, 2)
    dv = v.jet(t_arr, 1).derivative(1)
    e2 = np.exp(2 * t_arr)
    q = 0.25 * (e2 * e2 - 6 * e2 + 1) / (1 + e2) ** 2
    return scalar_or_raise(U.derivative(2) - (dv * dv + q) * U.derivative(0), t, "amplitude residual")


def kztt_phase_closed(t):
    """``(√3/2) arctan(2e^t/(1 - e^{2t}))`` continued across t = 0 (r = π/2)."""
    t = np.asarray(t, dtype=float)
    e = np.exp(t)
    raw = np.arctan2(2 * e, 1 - e * e)  # in (0, π), continuous branch
    return SQRT3 / 2 * raw
