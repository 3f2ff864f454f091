"""A conformal change of the flat plane turns a non-harmonic map biharmonic.

The plane with metric ``4(dr² + r²dθ²)/(1+r²)²`` is the round sphere.  The
map ``ρ = (k²/4) ln² r + ln(1+r²)`` into ``dρ² + ρ dφ²`` is biharmonic for that
metric.  Reduction of order then gives a two-parameter family of factors
making the same map f-biharmonic on the round sphere.

Run with ``python3 demos/02_conformal_change.py``.
"""
import math

import numpy as np

from fbiharm import build_case, conformal_bitension, reduction_of_order_factor, sweep, tension_radial
from fbiharm.oracle import reparametrize
from fbiharm.profiles import Interval

case = build_case("ps-special")
r = np.geomspace(0.05, 20, 7)
print("x(r) on the plane:        ", tension_radial(case.map, r))
print("4/(1+r²)²:                ", 4 / (1 + r * r) ** 2)
print("conformal bitension (f⁻¹g):", conformal_bitension(case.map, case.factor, r).radial)

# Arc length of f⁻¹g recovers the round sphere: σ̃(s) = sin s
rep = reparametrize(case.map.source, case.factor, Interval(0.01, 100.0), basepoint=1.0, offset=math.pi / 2)
s = rep.s_of_r(r)
print("\ns(r) = 2 arctan r:", np.allclose(s, 2 * np.arctan(r)))
print("warp after reparametrization minus sin s:", np.max(np.abs(rep.warp(s) - np.sin(s))))

# On the round-sphere presentation the tension is identically 1,
# so reduction of order gives f = C1 + C2 ln tan(s/2)
derived = build_case("derived-round-sphere")
s = np.linspace(0.2, 2.9, 6)
print("\nx(s) on the round sphere:", tension_radial(derived.map, s))
cf = reduction_of_order_factor(derived.map, 2.0, 0.5, basepoint=math.pi / 2, interval=Interval(0.1, 3.0))
print("f(s) - (2 + 0.5 ln tan(s/2)):", np.max(np.abs(cf.f(s) - (2 + 0.5 * np.log(np.tan(s / 2))))))

for C1, C2 in [(1.0, 0.0), (0.0, 1.0), (2.0, -0.7)]:
    rep = sweep(build_case("derived-round-sphere", C1=C1, C2=C2))
    print(f"C1={C1:4.1f} C2={C2:4.1f}  {rep.mode:<13} charts={len(rep.sign_chart)} "
          f"residual={rep.sup_normalized:.1e} -> {rep.verdict}")
