"""Grid sweeps, verdicts and machine-readable residual reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .catalog import VerificationCase, build_case
from .geometry import (conformal_bitension, f_bitension, bitension_profile, gauss_curvature,
                       tension_profile, WarpedSurface)
from .ode import riccati_residual
from .oracle import conformal_map, oracle_bitension, oracle_conformal_bitension, oracle_tension
from .profiles import DEFAULT_EXCLUSION, Interval, Profile
from . import jets as J

DEFAULT_GRID_N = 512
SKIP_CAP = 0.02


@dataclass(frozen=True)
class Grid:
    """Chebyshev points on each chart, with points near singular points removed."""

    points: np.ndarray
    exclusion_radius: float
    charts: tuple
    excluded: tuple = ()

    @property
    def n(self) -> int:
        return len(self.points)


def chebyshev_points(iv: Interval, n: int) -> np.ndarray:
    """First-kind Chebyshev points mapped onto the open interval, ascending."""
    j = np.arange(n)
    x = -np.cos((2 * j + 1) * np.pi / (2 * n))
    return iv.lo + 0.5 * (x + 1.0) * (iv.hi - iv.lo)


def make_grid(case_or_charts, n: int = DEFAULT_GRID_N, exclusion: float = DEFAULT_EXCLUSION,
              singular_points=()) -> Grid:
    if isinstance(case_or_charts, VerificationCase):
        case = case_or_charts
        charts = tuple(case.working_intervals)
        singular = set(case.map.singularities) | set(case.factor.f.singularities)
        for iv, _ in case.factor.sign_chart:
            singular |= {iv.lo, iv.hi}
        singular |= set(singular_points)
    else:
        charts = tuple(case_or_charts)
        singular = set(singular_points)
    hull_lo = min(c.lo for c in charts)
    hull_hi = max(c.hi for c in charts)
    interior = sorted(s for s in singular if hull_lo < s < hull_hi and math.isfinite(s))
    pts = np.concatenate([chebyshev_points(c, n) for c in charts])
    keep = np.ones(pts.shape, dtype=bool)
    for s in interior:
        keep &= np.abs(pts - s) >= exclusion
    return Grid(np.sort(pts[keep]), float(exclusion), charts, tuple(interior))


# residuals per mode ----------------------------------------------------------------------

def residual_values(case: VerificationCase, r: np.ndarray, mode: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(radial, angular) residual arrays; NaN marks points that could not be evaluated."""
    mode = mode or case.mode
    m, cf = case.map, case.factor
    r = np.asarray(r, dtype=float)
    with np.errstate(all="ignore"):
        if mode == "harmonic":
            radial = tension_profile(m)(r)
        elif mode == "biharmonic":
            radial = bitension_profile(m)(r)
        elif mode == "f-biharmonic":
            radial = f_bitension(m, cf, r).radial
        elif mode == "conformal-biharmonic":
            radial = conformal_bitension(m, cf, r).radial
        elif mode == "riccati":
            if case.beta is None:
                raise ValueError(f"case {case.name} has no β profile")
            radial = riccati_residual(case.beta, r)
        else:
            raise ValueError(f"unknown mode {mode!r}")
    radial = np.asarray(radial, dtype=float)
    return radial, np.where(np.isfinite(radial), 0.0, np.nan)


# reports ------------------------------------------------------------------------------

@dataclass
class ResidualReport:
    case: str
    mode: str
    tol: float
    verdict: str
    sup: float
    sup_normalized: float
    rms: float
    scale: float
    points: list
    radial: list
    angular: list
    rho: list = field(default_factory=list)
    f: list = field(default_factory=list)
    x: list = field(default_factory=list)
    grid_n: int = 0
    grid_lo: float = math.nan
    grid_hi: float = math.nan
    excluded: list = field(default_factory=list)
    exclusion_radius: float = DEFAULT_EXCLUSION
    skipped_points: list = field(default_factory=list)
    expected: str = ""
    anchor: str = ""
    sign_chart: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    oracle: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def skipped(self) -> int:
        return len(self.skipped_points)

    @property
    def matches_expected(self) -> bool:
        return self.verdict == self.expected

    # serialization ----------------------------------------------------------------
    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = {"n": d.pop("grid_n"), "lo": d.pop("grid_lo"), "hi": d.pop("grid_hi"),
                     "excluded": d.pop("excluded"), "exclusion_radius": d.pop("exclusion_radius")}
        d["residual"] = {"sup": d.pop("sup"), "sup_normalized": d.pop("sup_normalized"),
                         "rms": d.pop("rms"), "scale": d.pop("scale")}
        d["skipped"] = len(self.skipped_points)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ResidualReport":
        d = dict(d)
        g = d.pop("grid")
        res = d.pop("residual")
        d.pop("skipped", None)
        return cls(grid_n=g["n"], grid_lo=g["lo"], grid_hi=g["hi"], excluded=g["excluded"],
                   exclusion_radius=g["exclusion_radius"], sup=res["sup"], sup_normalized=res["sup_normalized"],
                   rms=res["rms"], scale=res["scale"], **d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True, allow_nan=True)

    @classmethod
    def from_json(cls, text: str) -> "ResidualReport":
        return cls.from_dict(json.loads(text))

    def csv_rows(self):
        cols = ("r", "rho", "f", "x", "residual_radial", "residual_angular")
        yield cols
        for row in zip(self.points, self.rho, self.f, self.x, self.radial, self.angular):
            yield tuple(repr(float(v)) for v in row)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in self.csv_rows():
            w.writerow(row)
        return buf.getvalue()

    def summary(self) -> str:
        return (f"{self.case:<28} {self.mode:<21} sup={self.sup:.3e} norm={self.sup_normalized:.3e} "
                f"tol={self.tol:.0e} verdict={self.verdict} expected={self.expected or '-'} "
                f"skipped={self.skipped}")


def _finite_list(a) -> list:
    return [float(v) for v in np.asarray(a, dtype=float)]


def residual_scale(case: VerificationCase, r: np.ndarray, mode: str | None = None) -> np.ndarray:
    """Pointwise size of the quantities a residual is assembled from.

    Rounding in the highest jets sets the floor a residual can reach in double
    precision, so verdicts divide by ``1 + |x| + |x''| + |ρ''''|``.  When f
    enters, this is multiplied by ``1 + |f| + |f'| + |f''|``, and for the
    conformal form once more by ``1 + |f|``.  The Riccati scale is the sum of
    the magnitudes of its terms.
    """
    mode = mode or case.mode
    r = np.asarray(r, dtype=float)
    with np.errstate(all="ignore"):
        if mode == "riccati":
            B = case.beta.jet(r, 2)
            b1, b2 = B.derivative(1), B.derivative(2)
            c = np.abs(3 / np.tan(r)) + np.abs(2 * np.tan(r))
            out = 1.0 + np.abs(b2) + c * np.abs(b1) + 2 * b1 * b1 + 4 * np.sin(r) ** 2
        else:
            X = tension_profile(case.map).jet(r, 2)
            rho4 = case.map.rho.jet(r, 4).derivative(4)
            out = 1.0 + np.abs(X.derivative(0)) + np.abs(X.derivative(2)) + np.abs(rho4)
            if mode in ("f-biharmonic", "conformal-biharmonic"):
                F = case.factor.effective.jet(r, 2)
                out = out * (1.0 + sum(np.abs(F.derivative(j)) for j in range(3)))
                if mode == "conformal-biharmonic":
                    out = out * (1.0 + np.abs(F.derivative(0)))
    return np.where(np.isfinite(out), out, np.inf)


def sweep(case: VerificationCase, grid: Grid | None = None, tol: float | None = None,
          mode: str | None = None) -> ResidualReport:
    """Evaluate the case's residual on the grid and decide a verdict.

    The verdict compares ``max |R(r)| / scale(r)`` against ``tol``, with the
    pointwise scale from :func:`residual_scale`; ``sup`` reports the raw
    ``max |R|``.  Points whose residual is not finite are skipped and counted.
    More than 2% skipped points makes the report inconclusive.
    """
    grid = grid or make_grid(case)
    tol = case.tol if tol is None else float(tol)
    mode = mode or case.mode
    r = grid.points
    radial, angular = residual_values(case, r, mode)
    ok = np.isfinite(radial)
    scale_r = residual_scale(case, r, mode)
    with np.errstate(all="ignore"):
        xv = tension_profile(case.map)(r)
        rho = case.map.rho(r)
        fv = case.factor.effective(r)
    if np.any(ok):
        sup = float(np.max(np.abs(radial[ok])))
        rms = float(np.sqrt(np.mean(radial[ok] ** 2)))
        q = np.abs(radial[ok]) / scale_r[ok]
        i = int(np.argmax(q))
        norm, scale = float(q[i]), float(scale_r[ok][i])
    else:
        sup = rms = norm = scale = math.nan
    skipped = r[~ok]
    if not np.any(ok) or len(skipped) > SKIP_CAP * len(r):
        verdict = "inconclusive"
    else:
        verdict = "pass" if norm <= tol else "fail"
    expected = case.expected if mode == case.mode else ("fail" if case.expected == "fail" else "")
    return ResidualReport(
        case=case.name, mode=mode, tol=tol, verdict=verdict, sup=sup, sup_normalized=norm, rms=rms, scale=scale,
        points=_finite_list(r[ok]), radial=_finite_list(radial[ok]), angular=_finite_list(angular[ok]),
        rho=_finite_list(rho[ok]), f=_finite_list(fv[ok]), x=_finite_list(xv[ok]),
        grid_n=int(grid.n), grid_lo=float(r[0]), grid_hi=float(r[-1]), excluded=[float(s) for s in grid.excluded],
        exclusion_radius=grid.exclusion_radius, skipped_points=_finite_list(skipped), expected=expected,
        anchor=case.anchor, sign_chart=[[iv.lo, iv.hi, int(s)] for iv, s in case.factor.sign_chart],
        params={k: v for k, v in case.params.items()}, notes=case.notes)


def _rel(a, b, scale):
    """``max |a - b| / scale`` over points where both sides are finite."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    ok = np.isfinite(a) & np.isfinite(b)
    if not np.any(ok):
        return math.nan
    return float(np.max(np.abs(a[ok] - b[ok]) / np.broadcast_to(scale, a.shape)[ok]))


def compare_oracle(case: VerificationCase, grid: Grid | None = None, conformal: bool | None = None) -> ResidualReport:
    """Formula-versus-oracle agreement for tension, bitension and (with f) conformal bitension.

    Differences are relative to the pointwise :func:`residual_scale` of the
    biharmonic (or conformal) residual; the reported ``sup`` is the worst of them.
    """
    grid = grid or make_grid(case)
    r = grid.points
    m = case.map
    x_form = tension_profile(m)(r)
    t_orc = oracle_tension(m, r)
    b_form = bitension_profile(m)(r)
    b_orc = oracle_bitension(m, r)
    s_x = residual_scale(case, r, "biharmonic")
    out = {
        "tension": _rel(x_form, t_orc.radial, s_x),
        "tension_angular": _rel(np.zeros_like(r), t_orc.angular, s_x),
        "bitension": _rel(b_form, b_orc.radial, s_x),
        "bitension_angular": _rel(np.zeros_like(r), b_orc.angular, s_x),
    }
    has_f = case.mode in ("f-biharmonic", "conformal-biharmonic") if conformal is None else conformal
    if has_f:
        worst = 0.0
        for iv in case.working_intervals:
            sub = r[(r > iv.lo) & (r < iv.hi)]
            if sub.size == 0:
                continue
            rep = conformal_map(m, case.factor, iv)
            a = conformal_bitension(m, case.factor, sub).radial
            b = oracle_conformal_bitension(m, case.factor, sub, reparam=rep).radial
            worst = max(worst, _rel(a, b, residual_scale(case, sub, "conformal-biharmonic")))
        out["conformal_bitension"] = worst
    sup = max(v for v in out.values() if not math.isnan(v))
    tol = 1e-6 if has_f else 1e-7
    return ResidualReport(
        case=case.name, mode="oracle", tol=tol, verdict="pass" if sup <= tol else "fail", sup=sup,
        sup_normalized=sup, rms=math.nan, scale=1.0, points=_finite_list(r), radial=_finite_list(b_form - b_orc.radial),
        angular=_finite_list(b_orc.angular), grid_n=grid.n, grid_lo=float(r[0]), grid_hi=float(r[-1]),
        excluded=[float(s) for s in grid.excluded], exclusion_radius=grid.exclusion_radius, expected="pass",
        anchor=case.anchor, oracle=out, params=dict(case.params))


def emit_report(rep: ResidualReport, format: str, destination) -> None:
    """Write the report as JSON or CSV to a path (or an open text stream)."""
    if format == "json":
        text = rep.to_json()
    elif format == "csv":
        text = rep.to_csv()
    else:
        raise ValueError(f"unknown format {format!r}")
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8") as fh:
        fh.write(text)


# open-question sweeps ---------------------------------------------------------------------

EX22_K = (-2.0, -1.0, 0.5, 1.0, 2.0)
EX22_C0 = (-1.0, -0.5, 0.0, 0.5, 1.0)
EX22_C = (0.5, 1.0, 2.0, 4.0, 8.0)


def example_2_2_sweep(ks=EX22_K, c0s=EX22_C0, cs=EX22_C, n: int = 64) -> list[dict]:
    """Residual of the "example-2-2" case over a (k, C₀, C) grid; reports, never asserts."""
    rows = []
    for k in ks:
        for c0 in c0s:
            for c in cs:
                case = build_case("example-2-2", {"k": k, "C0": c0, "C": c})
                rep = sweep(case, make_grid(case, n=n))
                rows.append({"k": k, "C0": c0, "C": c, "sup": rep.sup, "sup_normalized": rep.sup_normalized,
                             "skipped": rep.skipped, "verdict": rep.verdict})
    return rows


def gauss_curvature_sweep(rhos=(0.5, 1.0, 2.0, 4.0, 8.0)) -> list[dict]:
    """Curvature of ``dρ² + ρ dφ²`` from ``-λ''/λ`` against the two candidate closed forms."""
    from .profiles import POSITIVE
    s = WarpedSurface(POSITIVE, Profile.from_expr(J.sqrt, POSITIVE, (), "√ρ"), "dρ² + ρ dφ²")
    rows = []
    for p in rhos:
        K = gauss_curvature(s, p)
        rows.append({"rho": p, "K": K, "1/(4rho)": 1 / (4 * p), "1/(4rho^2)": 1 / (4 * p * p),
                     "matches": "1/(4rho^2)" if abs(K - 1 / (4 * p * p)) <= 1e-12 else
                     ("1/(4rho)" if abs(K - 1 / (4 * p)) <= 1e-12 else "neither")})
    return rows
