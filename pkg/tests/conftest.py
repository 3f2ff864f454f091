import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from fbiharm import jets as J
from fbiharm.geometry import ConformalFactor, RotSymMap, WarpedSurface
from fbiharm.profiles import REAL_LINE, Interval, Profile

settings.register_profile("repo", deadline=None, max_examples=40, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

SMOOTH = Interval(0.5, 2.0)


def random_map(rng: np.random.Generator) -> RotSymMap:
    """Entire warps and radial part, positive where they must be; fixed by the generator."""
    a = rng.uniform(-0.5, 0.5, 3)
    b = rng.uniform(-0.4, 0.4, 3)
    c = rng.uniform(-0.6, 0.6, 4)
    k = float(rng.choice([-1, 1]) * rng.uniform(0.3, 2.5))
    sigma = Profile.from_expr(lambda r: J.exp(a[0] + a[1] * r + a[2] * J.sin(r)), REAL_LINE, (), "σ")
    lam = Profile.from_expr(lambda p: J.exp(b[0] + b[1] * p + b[2] * J.cos(p)), REAL_LINE, (), "λ")
    rho = Profile.from_expr(lambda r: c[0] + (1 + c[1]) * r + c[2] * J.sin(c[3] * r + 1), REAL_LINE, (), "ρ")
    return RotSymMap(WarpedSurface(REAL_LINE, sigma, "σ"), WarpedSurface(REAL_LINE, lam, "λ"), rho, k)


def random_factor(rng: np.random.Generator) -> ConformalFactor:
    d = rng.uniform(-0.5, 0.5, 3)
    f = Profile.from_expr(lambda r: J.exp(d[0] + d[1] * r + d[2] * J.cos(2 * r)), REAL_LINE, (), "f")
    return ConformalFactor(f, ((SMOOTH, 1),))


def random_points(rng: np.random.Generator, n: int = 100, iv: Interval = SMOOTH) -> np.ndarray:
    return np.sort(rng.uniform(iv.lo + 0.01, iv.hi - 0.01, n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rel_err(a, b, scale=None):
    a, b = np.asarray(a, float), np.asarray(b, float)
    s = 1.0 + np.abs(b) if scale is None else scale
    return float(np.max(np.abs(a - b) / s))


PI = math.pi
