"""Named map/factor pairs with the verdict each one is expected to produce.

Every case bundles a :class:`~fbiharm.geometry.RotSymMap`, a conformal
factor, the residual mode to sweep, its working intervals and the DSL
source of its closed-form ingredients (used to cross-check the jet-built
profiles against the expression parser).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jets as J
from .dsl import profile as dsl_profile
from .errors import InvalidOverride, UnknownCase
from .geometry import ConformalFactor, RotSymMap, WarpedSurface, tension_profile
from .ode import (LinearODE2, SQRT3, assemble_system, cauchy_euler_rho, prop212_polynomial, prop212_rho,
                  reduction_of_order_factor, sign_changes, solve_ivp)
from .profiles import (DEFAULT_EXCLUSION, OPEN_0_PI, POSITIVE, REAL_LINE, Interval, Profile, identity,
                       sine)
from .quadrature import antiderivative

MODES = ("harmonic", "biharmonic", "f-biharmonic", "conformal-biharmonic", "riccati")
JET_TOL = 1e-8
QUAD_TOL = 1e-6


@dataclass(frozen=True)
class VerificationCase:
    name: str
    map: RotSymMap
    factor: ConformalFactor
    mode: str
    expected: str
    working_intervals: tuple
    anchor: str
    tol: float = JET_TOL
    params: dict = field(default_factory=dict)
    formulas: dict = field(default_factory=dict)
    beta: Profile | None = None
    notes: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.expected not in ("pass", "fail"):
            raise ValueError(f"expected must be 'pass' or 'fail', got {self.expected!r}")

    @property
    def f(self) -> Profile:
        return self.factor.effective


# small helpers -----------------------------------------------------------------------

def _sphere(domain: Interval = OPEN_0_PI, label: str = "S²") -> WarpedSurface:
    return WarpedSurface(domain, sine(domain), label)


def _surface(warp: Profile, domain: Interval, label: str) -> WarpedSurface:
    return WarpedSurface(domain, warp.restrict(domain) if domain is not REAL_LINE else warp, label)


def _expr(fn, domain: Interval = OPEN_0_PI, label: str = "", singularities=()) -> Profile:
    return Profile.from_expr(fn, domain, singularities, label)


def _split(interval: Interval, cuts, eps: float = DEFAULT_EXCLUSION) -> tuple:
    return tuple(interval.split(sorted(cuts), eps))


def _signed_factor(f: Profile, interval: Interval, cuts) -> ConformalFactor:
    return ConformalFactor.from_profile(f, interval, zeros=list(cuts))


def _tan_half(r):
    return J.tan(r / 2)


def _num(x: float) -> str:
    return repr(float(x))


# parameter handling ----------------------------------------------------------------

@dataclass(frozen=True)
class _Param:
    default: float
    check: Callable[[float], bool] = lambda v: math.isfinite(v)
    doc: str = "finite real"


def _nonzero(v):
    return math.isfinite(v) and v != 0


def _resolve(name: str, spec: dict, overrides: dict | None) -> dict:
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(spec)
    if unknown:
        raise InvalidOverride(f"{name}: unknown parameter(s) {sorted(unknown)}; known: {sorted(spec)}")
    out = {}
    for key, p in spec.items():
        raw = overrides.get(key, p.default)
        if isinstance(p.default, str):
            out[key] = str(raw)
            continue
        try:
            val = float(raw)
        except (TypeError, ValueError):
            raise InvalidOverride(f"{name}: {key}={raw!r} is not a number") from None
        if not p.check(val):
            raise InvalidOverride(f"{name}: {key}={val!r} must be {p.doc}")
        out[key] = val
    return out


# case builders ------------------------------------------------------------------------

def _identity_sphere(P):
    S = _sphere()
    m = RotSymMap(S, S, identity(OPEN_0_PI), 1)
    return VerificationCase(
        "identity-sphere", m, ConformalFactor.trivial(OPEN_0_PI), "harmonic", "pass",
        (OPEN_0_PI.shrink(DEFAULT_EXCLUSION),), "harmonic: identity of the round sphere",
        JET_TOL, P, {"sigma": "sin(r)", "lambda": "sin(rho)", "rho": "r"})


def _double_wrap(P):
    dom = Interval(0.0, math.pi / 2)
    m = RotSymMap(_sphere(dom), _sphere(), _expr(lambda r: 2 * r, dom, "2r"), 1)
    return VerificationCase(
        "double-wrap-nonbiharmonic", m, ConformalFactor.trivial(dom), "biharmonic", "fail",
        (dom.shrink(DEFAULT_EXCLUSION),), "neither harmonic nor biharmonic: ρ = 2r, k = 1 on the round sphere",
        JET_TOL, P, {"sigma": "sin(r)", "lambda": "sin(rho)", "rho": "2*r"})


def _example_2_1(P):
    dom = Interval(math.pi / 2, math.pi)
    rho = _expr(lambda r: 0.25 * J.log(_tan_half(r)) ** 2 - J.log(J.sin(r)) + 1, dom, "ρ")
    target = WarpedSurface(Interval(-1.0, math.inf), _expr(lambda p: J.sqrt(p + 1), Interval(-1.0, math.inf)), "ρ+1")
    m = RotSymMap(_sphere(dom), target, rho, 1)
    f = _expr(lambda r: 1 + 4 * J.log(_tan_half(r)), dom, "f")
    work = dom.shrink(DEFAULT_EXCLUSION)
    # f > 0 exactly where ln tan(r/2) > -1/4, which holds on all of (π/2, π)
    zero = 2 * math.atan(math.exp(-0.25))
    if work.contains(zero):
        work = Interval(zero + DEFAULT_EXCLUSION, work.hi)
    return VerificationCase(
        "example-2-1", m, ConformalFactor.from_profile(f, work, zeros=[]), "f-biharmonic", "pass", (work,),
        "non-harmonic f-biharmonic on (π/2, π) into dρ² + (ρ+1)dφ², f = 1 + 4 ln tan(r/2)",
        JET_TOL, P, {"sigma": "sin(r)", "lambda": "sqrt(rho+1)", "rho": "1/4*ln(tan(r/2))^2 - ln(sin(r)) + 1",
                     "f": "1 + 4*ln(tan(r/2))"})


def _example_2_2(P):
    k, C0, C = P["k"], P["C0"], P["C"]
    rho = _expr(lambda r: J.cot(r / 2) * (1 + J.log(1 + _tan_half(r) ** 2)), OPEN_0_PI, "ρ")
    lam = Profile.from_expr(lambda p: J.sqrt(p * p + 2 * C0 * p + C), REAL_LINE, (), "λ")
    m = RotSymMap(_sphere(), WarpedSurface(REAL_LINE, lam, "ρ²+2C₀ρ+C"), rho, k)
    f = _expr(lambda r: 1 + 3 / (2 * J.sin(r / 2) ** 2), OPEN_0_PI, "f")
    work = OPEN_0_PI.shrink(DEFAULT_EXCLUSION)
    # residual sweeps show the claim holds exactly when k² = 1 and C₀ = 0 (C is irrelevant)
    expected = "pass" if (k * k == 1.0 and C0 == 0.0) else "fail"
    return VerificationCase(
        "example-2-2", m, ConformalFactor.from_profile(f, work, zeros=[]), "f-biharmonic", expected, (work,),
        "non-harmonic f-biharmonic into dρ² + (ρ²+2C₀ρ+C)dφ², f = 1 + 3/(2 sin²(r/2))",
        JET_TOL, P, {"sigma": "sin(r)", "lambda": f"sqrt(rho^2 + 2*{_num(C0)}*rho + {_num(C)})",
                     "rho": "abs(cot(r/2))*(1+ln(1+tan(r/2)^2))", "f": "1 + 3/(2*sin(r/2)^2)"},
        notes="expected verdict follows the parameter sweep, not the unrestricted claim")


def _ps_case(name, P, anchor):
    k, C1, C2, C3, C4 = P["k"], P["C1"], P["C2"], P["C3"], P["C4"]
    source = WarpedSurface(POSITIVE, identity(POSITIVE), "flat plane, polar")
    target = WarpedSurface(POSITIVE, Profile.from_expr(J.sqrt, POSITIVE, (), "√ρ"), "dρ² + ρ dφ²")
    rho = cauchy_euler_rho(k, C1, C2, C3, C4)
    m = RotSymMap(source, target, rho, k)
    f = Profile.from_expr(lambda r: (1 + r * r) ** 2 / 4, POSITIVE, (), "(1+r²)²/4")
    work = Interval(P["lo"], P["hi"])
    formulas = {"sigma": "r", "lambda": "sqrt(rho)", "f": "(1+r^2)^2/4"}
    if C4 == 0:
        formulas["rho"] = (f"{_num(C1)} + {_num(C2 - 2 * C3)}*ln(r) + {_num(C3)}*ln(1+r^2)"
                           f" + {_num(k * k / 4)}*ln(r)^2")
    tol = QUAD_TOL if C4 != 0 else JET_TOL
    return VerificationCase(
        name, m, ConformalFactor(f, ((work, 1),)), "conformal-biharmonic", "pass", (work,), anchor,
        tol, P, formulas)


def _ps_family(P):
    return _ps_case("ps-family", P, "biharmonic from the Riemann sphere 4(dr²+r²dθ²)/(1+r²)² into dρ² + ρdφ², "
                                   "general Cauchy–Euler ρ")


def _ps_special(P):
    return _ps_case("ps-special", dict(P, C1=0.0, C2=2.0, C3=1.0, C4=0.0),
                    "proper biharmonic: ρ = (k²/4)(ln r)² + ln(1+r²) from the Riemann sphere into dρ² + ρdφ²")


def _prop_2_12(P):
    k, C1, C2, C3, C4 = P["k"], P["C1"], P["C2"], P["C3"], P["C4"]
    target = WarpedSurface(POSITIVE, Profile.from_expr(J.sqrt, POSITIVE, (), "√ρ"), "dρ² + ρ dφ²")
    m = RotSymMap(_sphere(), target, prop212_rho(k, C1, C2, C3, C4), k)
    f = _expr(lambda r: J.sin(r) ** 2 / (1 + J.log(_tan_half(r)) ** 2) ** 2, OPEN_0_PI, "f")
    work = OPEN_0_PI.shrink(DEFAULT_EXCLUSION)
    coeffs = prop212_polynomial(k, C1, C2, C3, C4)
    poly = " + ".join(f"{_num(c)}*ln(tan(r/2))^{i}" for i, c in enumerate(coeffs) if c != 0) or "0"
    return VerificationCase(
        "prop-2-12", m, ConformalFactor(f, ((work, 1),)), "f-biharmonic", "pass", (work,),
        "proper f-biharmonic into dρ² + ρdφ², ρ polynomial in ln tan(r/2), f = sin²r/(1+ln²tan(r/2))²",
        JET_TOL, P, {"sigma": "sin(r)", "lambda": "sqrt(rho)", "rho": poly,
                     "f": "sin(r)^2/(1+ln(tan(r/2))^2)^2"})


def glob_factor() -> Profile:
    def fn(r):
        T2 = _tan_half(r) ** 2
        return 4 * (1 + T2) * (1 + 2 * T2) ** 1.5 / (3 * T2 * T2 + 9 * T2 + 6 + J.cot(r / 2) ** 2)
    return _expr(fn, OPEN_0_PI, "f_glob")


def glob_rho() -> Profile:
    return _expr(lambda r: 0.5 * J.arccos(J.sin(r / 2) ** 2), OPEN_0_PI, "½ arccos(sin²(r/2))")


def _glob(P):
    m = RotSymMap(_sphere(), _sphere(), glob_rho(), 2)
    work = OPEN_0_PI.shrink(DEFAULT_EXCLUSION)
    return VerificationCase(
        "glob", m, ConformalFactor(glob_factor(), ((work, 1),)), "f-biharmonic", "pass", (work,),
        "proper f-biharmonic S² → S², ρ = ½ arccos(sin²(r/2)), k = 2",
        JET_TOL, P, {"sigma": "sin(r)", "lambda": "sin(rho)", "rho": "1/2*arccos(sin(r/2)^2)",
                     "f": "4*(1+tan(r/2)^2)*(1+2*tan(r/2)^2)^(3/2)/(3*tan(r/2)^4+9*tan(r/2)^2+6+cot(r/2)^2)"})


def kzt_factor(sign: int = 1) -> Profile:
    """Signed factor of the k = ±√3 cases (its absolute value is the conformal factor)."""
    s = float(sign)

    def fn(r):
        T = _tan_half(r)
        T2 = T * T
        return (T ** (1 + s * SQRT3) * (T2 + 7 + s * 4 * SQRT3) * (T2 - 2 - s * SQRT3)
                / ((1 + T2) ** 2 * (T2 - 1)))
    return _expr(fn, OPEN_0_PI, "f_kzt" if sign > 0 else "f_g3")


def _kzt_like(name, sign, P, anchor):
    zero = 2 * math.atan(math.sqrt(2 + sign * SQRT3))
    cuts = sorted([math.pi / 2, zero])
    m = RotSymMap(_sphere(), _sphere(), identity(OPEN_0_PI), sign * SQRT3)
    work = OPEN_0_PI.shrink(DEFAULT_EXCLUSION)
    f = kzt_factor(sign).with_singularities(cuts)
    e, c1, c2 = ("1+sqrt(3)", "7+4*sqrt(3)", "-2-sqrt(3)") if sign > 0 else ("1-sqrt(3)", "7-4*sqrt(3)", "-2+sqrt(3)")
    return VerificationCase(
        name, m, _signed_factor(f, work, cuts), "f-biharmonic", "pass", _split(work, cuts), anchor,
        JET_TOL, dict(P, zero=zero),
        {"sigma": "sin(r)", "lambda": "sin(rho)", "rho": "r",
         "f": f"abs(tan(r/2)^({e})*(tan(r/2)^2+{c1})*(tan(r/2)^2+{c2})/((1+tan(r/2)^2)^2*(tan(r/2)^2-1)))"})


def _kzt(P):
    return _kzt_like("kzt", 1, P, "f-biharmonic S² → S², ρ = r, k = √3, |f| singular at π/2 and 2 arctan √(2+√3)")


def _g3(P):
    return _kzt_like("g3", -1, P, "proper f-biharmonic S² → S², ρ = r, k = -√3, |f| singular at π/2 and 2 arctan √(2-√3)")


def kztt_factor() -> Profile:
    return _expr(lambda r: J.tan(r) * J.sin(SQRT3 / 2 * r) / J.sqrt(J.sin(r)), OPEN_0_PI, "f_kztt",
                 (math.pi / 2,))


def _kztt(P):
    m = RotSymMap(_sphere(), _sphere(), identity(OPEN_0_PI), 0.5)
    work = OPEN_0_PI.shrink(DEFAULT_EXCLUSION)
    cuts = [math.pi / 2]
    return VerificationCase(
        "kztt", m, _signed_factor(kztt_factor(), work, cuts), "f-biharmonic", "pass", _split(work, cuts),
        "f-biharmonic S² → S², ρ = r, k = ½, f = |tan r sin(√3 r/2)/√sin r|",
        JET_TOL, P, {"sigma": "sin(r)", "lambda": "sin(rho)", "rho": "r",
                     "f": "abs(tan(r)*sin(sqrt(3)/2*r)/sqrt(sin(r)))"})


def _riccati(P):
    dom = Interval(0.0, math.pi / 2)
    m = RotSymMap(_sphere(dom), _sphere(), _expr(lambda r: 2 * r, dom, "2r"), 1)
    sys = assemble_system(m)
    window = dom.shrink(DEFAULT_EXCLUSION)
    sol = solve_ivp(sys, P["r0"], P["y0"], P["dy0"], window)
    x = tension_profile(m)
    f = Profile(lambda r, n: sol.y.jet(r, n) / x.jet(r, n), window, (), "y/x")
    cuts = [c for c, _ in sign_changes(f, window)]
    pieces = [iv for iv in window.split(cuts, DEFAULT_EXCLUSION) if np.all(f(np.linspace(iv.lo, iv.hi, 35)[1:-1]) > 0)]
    if not pieces:
        raise InvalidOverride("the solution has no positive stretch on the window")
    beta = f.map(lambda u: 0.5 * J.log(u), "½ ln f")
    return VerificationCase(
        "riccati-double-wrap", m, ConformalFactor.from_profile(f, window, zeros=cuts), "riccati", "pass",
        tuple(pieces), "f-biharmonicity of ρ = 2r, k = 1 ⇔ Riccati equation for β = ½ ln f",
        QUAD_TOL, P, {"sigma": "sin(r)", "lambda": "sin(rho)", "rho": "2*r"}, beta=beta,
        notes="β from a numerical solution of the linear system; only local existence is exhibited")


def stcoy_case(sigma: str = "sin(r)", lo: float = math.pi / 2, hi: float = math.pi, c1: float = 1.0,
               c2: float = 1.0, C1: float = 0.0, C2: float = 1.0, C3: float = 0.0, C4: float = 1.0,
               k: float = 1.0, C0: float = 0.5, C: float = 1.0, basepoint: float | None = None) -> VerificationCase:
    """Nested-quadrature family over any warp σ with a linear-in-ρ target ``λ² = 2C₀ρ + C``.

    ``G = ∫σ⁻¹``, ``ρ = ∫ (∫(C1 σ G + C2 σ + k² C0/σ) + C3)/σ + C4`` and
    ``f = c1 + c2 ∫ (C1 G + C2)⁻² σ⁻¹``; all antiderivatives share one basepoint.
    """
    P = dict(sigma=sigma, lo=lo, hi=hi, c1=c1, c2=c2, C1=C1, C2=C2, C3=C3, C4=C4, k=k, C0=C0, C=C)
    if (c1 * c1 + c2 * c2) * (C1 * C1 + C2 * C2) == 0:
        raise InvalidOverride("need (c1² + c2²)(C1² + C2²) ≠ 0")
    if k == 0:
        raise InvalidOverride("k must be nonzero")
    dom = Interval(lo, hi)
    b = dom.midpoint if basepoint is None else float(basepoint)
    P["basepoint"] = b
    sig = dsl_profile(sigma, dom)
    G = antiderivative(1.0 / sig, b, "∫σ⁻¹")
    inner = antiderivative(C1 * sig * G + C2 * sig + (k * k * C0) / sig, b, "inner")
    rho = antiderivative((inner + C3) / sig, b, "ρ - C4") + C4
    rho = Profile(rho._fn, rho.domain, (), "ρ (nested quadrature)")
    f = antiderivative((C1 * G + C2) ** -2.0 / sig, b, "∫(C1G+C2)⁻²σ⁻¹") * c2 + c1
    f = Profile(f._fn, f.domain, (), "f (quadrature)")
    lam = Profile.from_expr(lambda p: J.sqrt(2 * C0 * p + C), REAL_LINE, (), "√(2C₀ρ+C)")
    m = RotSymMap(WarpedSurface(dom, sig, sigma), WarpedSurface(REAL_LINE, lam, "dρ² + (2C₀ρ+C)dφ²"), rho, k)
    work = dom.shrink(DEFAULT_EXCLUSION)
    cuts = [c for c, _ in sign_changes(f, work)]
    return VerificationCase(
        "stcoy", m, ConformalFactor.from_profile(f, work, zeros=cuts), "conformal-biharmonic", "pass",
        _split(work, cuts), "proper biharmonic from (M, f⁻¹g) with nested-integral ρ and λ² = 2C₀ρ + C",
        QUAD_TOL, P, {"sigma": sigma, "lambda": f"sqrt(2*{_num(C0)}*rho + {_num(C)})"})


def _stcoy(P):
    return stcoy_case(**P)


def lfpyj_case(A: float = 1.0, k: float = 2.0, y0: float = 1.0, dy0: float = 0.0) -> VerificationCase:
    """``ρ = A r`` on the round sphere with ``f = y(ln tan(r/2)) / x``, y from the t-equation."""
    if A <= 0 or k == 0:
        raise InvalidOverride("need A > 0 and k ≠ 0")
    hi = min(math.pi, math.pi / A)
    dom = Interval(0.0, hi)
    m = RotSymMap(_sphere(dom), _sphere(), _expr(lambda r: A * r, dom, f"{A:g} r"), k)
    work = dom.shrink(DEFAULT_EXCLUSION)
    k2 = k * k
    x = _expr(lambda r: A * J.cot(r) - k2 * J.sin(2 * A * r) / (2 * J.sin(r) ** 2), dom, "x")
    if np.nanmax(np.abs(x(np.linspace(work.lo, work.hi, 257)))) < 1e-8:
        raise InvalidOverride("the map is harmonic for these A, k; the construction needs x ≠ 0")
    t_lo, t_hi = (math.log(math.tan(v / 2)) for v in (work.lo, work.hi))
    q = Profile.from_expr(lambda t: -k2 * J.cos(4 * A * J.arctan(J.exp(t))), REAL_LINE, (), "-k² cos(4A arctan e^t)")
    t_win = Interval(t_lo, t_hi)
    t0 = 0.0 if t_win.contains(0.0) else t_win.midpoint
    sol = solve_ivp(LinearODE2(Profile.constant(0.0), q, REAL_LINE), t0, y0, dy0, t_win)
    t_of_r = _expr(lambda r: J.log(_tan_half(r)), dom, "ln tan(r/2)")
    y_r = sol.y.compose(t_of_r)
    f = Profile(lambda r, n: y_r.jet(r, n) / x.jet(r, n), work, (), "y(t(r))/x")
    cuts = [c for c, _ in sign_changes(f, work)]
    return VerificationCase(
        "lfpyj", m, ConformalFactor.from_profile(f, work, zeros=cuts), "f-biharmonic", "pass",
        _split(work, cuts), "f-biharmonic S² → S², ρ = A r, f = y(ln tan(r/2))/x with y'' = k² cos(4A arctan e^t) y",
        QUAD_TOL, dict(A=A, k=k, y0=y0, dy0=dy0), {"sigma": "sin(r)", "lambda": "sin(rho)", "rho": f"{_num(A)}*r"})


def _lfpyj(P):
    return lfpyj_case(**P)


def round_sphere_rho(k: float = 1.0) -> Profile:
    return _expr(lambda s: (k * k / 4) * J.log(_tan_half(s)) ** 2 - 2 * J.log(J.cos(s / 2)), OPEN_0_PI,
                 "(k²/4) ln² tan(s/2) - 2 ln cos(s/2)")


def derived_round_sphere_case(C1: float = 1.0, C2: float = 1.0, k: float = 1.0,
                              lo: float = 0.1, hi: float = math.pi - 0.1) -> VerificationCase:
    """The ps-special map rewritten on the round sphere, with f from reduction of order.

    Here x ≡ 1, so ``f = C1 + C2 ∫_{π/2} ds/sin s = C1 + C2 ln tan(s/2)``.
    """
    target = WarpedSurface(POSITIVE, Profile.from_expr(J.sqrt, POSITIVE, (), "√ρ"), "dρ² + ρ dφ²")
    m = RotSymMap(_sphere(), target, round_sphere_rho(k), k)
    work = Interval(lo, hi)
    cf = reduction_of_order_factor(m, C1, C2, basepoint=math.pi / 2, interval=work)
    cuts = [c for c, _ in sign_changes(cf.f, work)]
    mode = "biharmonic" if C2 == 0 else "f-biharmonic"
    return VerificationCase(
        "derived-round-sphere", m, cf, mode, "pass", _split(work, cuts),
        "reduction of order on the round-sphere presentation of the ps-special map",
        QUAD_TOL, dict(C1=C1, C2=C2, k=k, lo=lo, hi=hi),
        {"sigma": "sin(r)", "lambda": "sqrt(rho)", "rho": f"{_num(k * k / 4)}*ln(tan(r/2))^2 - 2*ln(cos(r/2))"})


def _derived(P):
    return derived_round_sphere_case(**P)


_F = _Param
_K = _Param(1.0, _nonzero, "a nonzero real")

_REGISTRY: dict[str, tuple[Callable, dict]] = {
    "identity-sphere": (_identity_sphere, {}),
    "double-wrap-nonbiharmonic": (_double_wrap, {}),
    "example-2-1": (_example_2_1, {}),
    "example-2-2": (_example_2_2, {"k": _K, "C0": _F(0.5), "C": _F(1.0)}),
    "ps-family": (_ps_family, {"k": _K, "C1": _F(1.0), "C2": _F(2.0), "C3": _F(1.0), "C4": _F(1.0),
                               "lo": _F(0.01, lambda v: v > 0, "positive"), "hi": _F(100.0, lambda v: v > 0, "positive")}),
    "ps-special": (_ps_special, {"k": _K, "lo": _F(0.01, lambda v: v > 0, "positive"),
                                 "hi": _F(100.0, lambda v: v > 0, "positive")}),
    "prop-2-12": (_prop_2_12, {"k": _K, "C1": _F(1.0), "C2": _F(0.0), "C3": _F(0.0), "C4": _F(1.0)}),
    "glob": (_glob, {}),
    "kzt": (_kzt, {}),
    "g3": (_g3, {}),
    "kztt": (_kztt, {}),
    "riccati-double-wrap": (_riccati, {"r0": _F(math.pi / 4, lambda v: 0.01 < v < math.pi / 2 - 0.01, "inside (0, π/2)"),
                                       "y0": _F(2.0), "dy0": _F(0.0)}),
}

_BUILDERS: dict[str, tuple[Callable, dict]] = {
    "stcoy": (_stcoy, {"sigma": _Param("sin(r)", doc="DSL text"), "lo": _F(math.pi / 2), "hi": _F(math.pi),
                       "c1": _F(1.0), "c2": _F(1.0), "C1": _F(0.0), "C2": _F(1.0), "C3": _F(0.0), "C4": _F(1.0),
                       "k": _K, "C0": _F(0.5), "C": _F(1.0)}),
    "lfpyj": (_lfpyj, {"A": _F(1.0, lambda v: v > 0, "positive"), "k": _Param(2.0, _nonzero, "a nonzero real"),
                       "y0": _F(1.0), "dy0": _F(0.0)}),
    "derived-round-sphere": (_derived, {"C1": _F(1.0), "C2": _F(1.0), "k": _K, "lo": _F(0.1), "hi": _F(math.pi - 0.1)}),
}

CASE_NAMES = tuple(_REGISTRY)
BUILDER_NAMES = tuple(_BUILDERS)


def parameters(name: str) -> dict:
    """Default parameter values of a case or builder."""
    spec = _lookup(name)[1]
    return {k: p.default for k, p in spec.items()}


def _lookup(name: str):
    if name in _REGISTRY:
        return _REGISTRY[name]
    if name in _BUILDERS:
        return _BUILDERS[name]
    raise UnknownCase(f"unknown case {name!r}; known: {', '.join(CASE_NAMES + BUILDER_NAMES)}")


def build_case(name: str, overrides: dict | None = None, **kw) -> VerificationCase:
    """Construct a named case, applying parameter overrides (``build_case("ps-special", k=2)``)."""
    builder, spec = _lookup(name)
    P = _resolve(name, spec, {**(overrides or {}), **kw})
    return builder(P)


def list_cases() -> list[VerificationCase]:
    """The twelve named cases with default parameters, in a fixed order."""
    return [build_case(name) for name in CASE_NAMES]
