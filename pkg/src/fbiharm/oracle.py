"""First-principles tension and bitension, independent of the closed formulas.

Christoffel symbols are computed from the metric components, the tension
field is the trace of the second fundamental form of the map, and the
bitension is the rough Laplacian of the tension field along the map minus
the target curvature term, all traced over the orthonormal frame
``{∂_r, σ^{-1} ∂_θ}``.  Nothing here reuses :mod:`fbiharm.geometry`
formulas, so agreement between the two is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jets as J
from .errors import NonPositiveFactor
from .geometry import ConformalFactor, RotSymMap, TensionValue, WarpedSurface
from .jets import Jet
from .profiles import Interval, Profile, scalar_or_raise
from .quadrature import InverseProfile, antiderivative


@dataclass(frozen=True)
class ChristoffelData:
    """Non-zero Christoffel symbols at a point (domain at r, target at rho(r))."""

    r_thth: float
    th_rth: float
    rho_phph: float
    ph_rhoph: float


def _zero(n, shape):
    return Jet.constant(0.0, n, shape)


def _christoffel(g, n, shape):
    """Γ[k][i][j] for a 2D metric whose components depend on coordinate 0 only.

    ``g`` is a 2x2 nested list of jets of order n + 1.
    """
    dg = [[[g[i][j].deriv() if l == 0 else _zero(n, shape) for l in range(2)]
           for j in range(2)] for i in range(2)]  # dg[i][j][l] = ∂_l g_ij
    det = g[0][0].truncate(n) * g[1][1].truncate(n) - g[0][1].truncate(n) * g[1][0].truncate(n)
    inv = [[g[1][1].truncate(n) / det, -g[0][1].truncate(n) / det],
           [-g[1][0].truncate(n) / det, g[0][0].truncate(n) / det]]
    gam = [[[None] * 2 for _ in range(2)] for _ in range(2)]
    for k in range(2):
        for i in range(2):
            for j in range(2):
                acc = _zero(n, shape)
                for l in range(2):
                    acc = acc + inv[k][l] * (dg[j][l][i] + dg[i][l][j] - dg[i][j][l])
                gam[k][i][j] = 0.5 * acc
    return gam


def _domain_christoffel(m: RotSymMap, r, n):
    S = m.sigma.jet(r, n + 1)
    shape = np.shape(r)
    g = [[Jet.constant(1.0, n + 1, shape), _zero(n + 1, shape)],
         [_zero(n + 1, shape), S * S]]
    return _christoffel(g, n, shape), S


def _target_christoffel(m: RotSymMap, P: Jet, n):
    """Target symbols at rho(r) as jets in r (order n)."""
    shape = P.shape
    L = m.lam.jet(P.coeffs[0], n + 1)
    h = [[Jet.constant(1.0, n + 1, shape), _zero(n + 1, shape)],
         [_zero(n + 1, shape), L * L]]
    gam = _christoffel(h, n, shape)
    Pn = P.truncate(n)
    return [[[J.series_compose(gam[k][i][j], Pn) for j in range(2)] for i in range(2)] for k in range(2)]


def _map_data(m: RotSymMap, r, n):
    """Differential of the map and frame components, as jets of order n + 1."""
    shape = np.shape(r)
    P = m.rho.jet(r, n + 2)
    dphi = [[P.deriv(), _zero(n + 1, shape)],
            [_zero(n + 1, shape), Jet.constant(float(m.k), n + 1, shape)]]
    return P, dphi


def christoffel_data(m: RotSymMap, r) -> ChristoffelData:
    r = np.asarray(r, dtype=float)
    gm, _ = _domain_christoffel(m, r, 0)
    P = m.rho.jet(r, 1)
    gn = _target_christoffel(m, P, 0)
    return ChristoffelData(gm[0][1][1].value, gm[1][0][1].value, gn[0][1][1].value, gn[1][0][1].value)


def _tension_jets(m: RotSymMap, r, n):
    """Components (V^rho, V^phi) of Tr_g ∇dφ as jets of order n."""
    shape = np.shape(r)
    gm, S = _domain_christoffel(m, r, n)
    P, dphi = _map_data(m, r, n)
    gn = _target_christoffel(m, P, n)
    inv_s = Jet.constant(1.0, n, shape) / S.truncate(n)
    frame = [[Jet.constant(1.0, n, shape), _zero(n, shape)], [_zero(n, shape), inv_s]]
    out = []
    for gamma in range(2):
        acc = _zero(n, shape)
        for a in range(2):
            for i in range(2):
                for j in range(2):
                    hess = dphi[gamma][j].deriv() if i == 0 else _zero(n, shape)
                    term = hess
                    for k in range(2):
                        term = term - gm[k][i][j] * dphi[gamma][k].truncate(n)
                    for al in range(2):
                        for be in range(2):
                            term = term + gn[gamma][al][be] * dphi[al][i].truncate(n) * dphi[be][j].truncate(n)
                    acc = acc + frame[a][i] * frame[a][j] * term
        out.append(acc)
    return out


def oracle_tension(m: RotSymMap, r) -> TensionValue:
    r_arr = np.asarray(r, dtype=float)
    V = _tension_jets(m, r_arr, 0)
    return TensionValue(scalar_or_raise(V[0].value, r, "oracle tension"),
                        scalar_or_raise(V[1].value, r, "oracle tension"))


def oracle_bitension(m: RotSymMap, r) -> TensionValue:
    """Rough Laplacian of τ along φ minus ``Tr R^N(dφ, τ) dφ``."""
    r = np.asarray(r, dtype=float) if np.ndim(r) else r
    r_arr = np.asarray(r, dtype=float)
    shape = r_arr.shape
    V = _tension_jets(m, r_arr, 2)
    gm, S = _domain_christoffel(m, r_arr, 1)
    P, dphi = _map_data(m, r_arr, 1)
    gn = _target_christoffel(m, P, 1)
    # W[j] = ∇_{∂_j} V  (order 1)
    W = []
    for j in range(2):
        comp = []
        for gamma in range(2):
            acc = V[gamma].deriv() if j == 0 else _zero(1, shape)
            for al in range(2):
                for be in range(2):
                    acc = acc + gn[gamma][al][be] * dphi[al][j].truncate(1) * V[be].truncate(1)
            comp.append(acc)
        W.append(comp)
    # H[i][j] = ∇_{∂_i} W[j] - W[∇_{∂_i} ∂_j]  (order 0)
    inv_s = 1.0 / S.coeffs[0]
    frame = [[np.ones(shape), np.zeros(shape)], [np.zeros(shape), inv_s]]
    rough = [np.zeros(shape), np.zeros(shape)]
    for i in range(2):
        for j in range(2):
            for gamma in range(2):
                h = W[j][gamma].deriv().value if i == 0 else np.zeros(shape)
                for al in range(2):
                    for be in range(2):
                        h = h + gn[gamma][al][be].value * dphi[al][i].value * W[j][be].value
                for k in range(2):
                    h = h - gm[k][i][j].value * W[k][gamma].value
                for a in range(2):
                    rough[gamma] = rough[gamma] + frame[a][i] * frame[a][j] * h
    # curvature term with R(X,Y)Z = K(<Y,Z>X - <X,Z>Y), K = -λ''/λ
    L = m.lam.jet(P.coeffs[0], 2)
    lam = L.coeffs[0]
    K = -L.derivative(2) / lam
    metric = [np.ones(shape), lam * lam]
    v = [V[0].value, V[1].value]
    curv = [np.zeros(shape), np.zeros(shape)]
    for a in range(2):
        X = [sum(frame[a][i] * dphi[al][i].value for i in range(2)) for al in range(2)]
        xv = sum(metric[al] * X[al] * v[al] for al in range(2))
        xx = sum(metric[al] * X[al] * X[al] for al in range(2))
        for gamma in range(2):
            curv[gamma] = curv[gamma] + K * (xv * X[gamma] - xx * v[gamma])
    tau2 = [rough[g] - curv[g] for g in range(2)]
    return TensionValue(scalar_or_raise(tau2[0], r, "oracle bitension"),
                        scalar_or_raise(tau2[1], r, "oracle bitension"))


# conformal change by isometric reparametrization ------------------------------

@dataclass(frozen=True)
class ReparametrizedSurface(WarpedSurface):
    """``f^{-1}(dr^2 + σ^2 dθ^2)`` written as ``ds^2 + σ̃(s)^2 dθ^2``."""

    s_of_r: Profile = None
    r_of_s: Profile = None
    basepoint: float = 0.0
    offset: float = 0.0


def reparametrize(s: WarpedSurface, cf: ConformalFactor, window: Interval | None = None,
                  basepoint: float | None = None, offset: float = 0.0) -> ReparametrizedSurface:
    """Arc-length presentation of the conformally changed metric.

    ``s(r) = offset + ∫_basepoint^r f^{-1/2}``; the new warp is
    ``σ̃(s) = σ(r(s)) f(r(s))^{-1/2}`` with ``r(s)`` found by monotone inversion.
    """
    if window is None:
        window = s.coord
    if not window.finite:
        raise ValueError("reparametrize needs a finite window; pass one explicitly")
    if basepoint is None:
        basepoint = window.midpoint
    f = cf.effective
    probe = np.linspace(window.lo, window.hi, 257)
    fv = f(probe)
    if np.any(fv[np.isfinite(fv)] <= 0):
        raise NonPositiveFactor("conformal factor is not positive on the window")
    # quadrature cells must stay inside the window, whose ends may be singular
    inv_sqrt_f = f.restrict(window).map(lambda u: u ** -0.5, f"({f.label})^(-1/2)")
    s_of_r = antiderivative(inv_sqrt_f, basepoint) + offset
    r_of_s = InverseProfile(s_of_r, window.shrink(1e-9 * window.width))
    warp = (s.warp * inv_sqrt_f).compose(r_of_s)
    return ReparametrizedSurface(r_of_s.domain, warp, f"{s.label} / f", s_of_r, r_of_s, float(basepoint), float(offset))


def conformal_map(m: RotSymMap, cf: ConformalFactor, window: Interval | None = None) -> tuple[RotSymMap, ReparametrizedSurface]:
    """The same map written on the reparametrized source surface."""
    rep = reparametrize(m.source, cf, window or m.source.coord)
    return RotSymMap(rep, m.target, m.rho.compose(rep.r_of_s), m.k), rep


def oracle_conformal_bitension(m: RotSymMap, cf: ConformalFactor, r, window: Interval | None = None,
                               reparam: tuple | None = None) -> TensionValue:
    """Bitension from ``(M, f^{-1} g)`` via the arc-length reparametrization."""
    mt, rep = reparam if reparam is not None else conformal_map(m, cf, window)
    s = rep.s_of_r(np.asarray(r, dtype=float))
    out = oracle_bitension(mt, s)
    return TensionValue(scalar_or_raise(out.radial, r, "oracle conformal bitension"),
                        scalar_or_raise(out.angular, r, "oracle conformal bitension"))
