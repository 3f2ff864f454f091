"""The explicit factors on the round sphere with ρ = r, and the Riccati form.

Run with ``python3 demos/04_ansatz_solutions.py``.
"""
import math

import numpy as np

from fbiharm import build_case, sweep
from fbiharm.ode import (LinearODE2, kzt_ansatz_coeffs, kzt_q, kzt_solution, kztt_amplitude_phase,
                         kztt_residual, riccati_residual)
from fbiharm.profiles import REAL_LINE, Profile

# k = √3: y(t) = e^{√3 t}(a0 + a1 e^{2t} + e^{4t})/(1+e^{2t})² with a linear system for a0, a1
a0, a1, a2 = kzt_ansatz_coeffs()
print(f"a0 = {a0:.10f}  (-26 - 15√3 = {-26 - 15 * math.sqrt(3):.10f})")
print(f"a1 = {a1:.10f}  ( 5 + 3√3  = {5 + 3 * math.sqrt(3):.10f})")
t = np.linspace(-3, 3, 7)
ode = LinearODE2(Profile.constant(0.0), kzt_q(3.0), REAL_LINE)
print("y'' + q y on [-3, 3]:", np.max(np.abs(ode.residual(kzt_solution(), t))))

# The resulting |f| changes sign at π/2 and at 2 arctan √(2+√3)
for name in ("kzt", "g3"):
    case = build_case(name)
    chart = ", ".join(f"({iv.lo:.4f}, {iv.hi:.4f}):{s:+d}" for iv, s in case.factor.sign_chart)
    print(f"{name}: {chart}  -> {sweep(case).verdict}")

# k = ½: amplitude and phase, with the phase linear in r
u, v = kztt_amplitude_phase()
r = np.linspace(0.3, 2.8, 6)
print("\nv(t(r)) - (√3/2)(r - π/2):", np.max(np.abs(v(np.log(np.tan(r / 2))) - math.sqrt(3) / 2 * (r - math.pi / 2))))
print("amplitude equation residual:", np.max(np.abs(kztt_residual(u, v, t))))
print("kztt ->", sweep(build_case("kztt")).verdict)

# ρ = 2r: f comes from a numerical solution; β = ½ ln f solves the Riccati equation
case = build_case("riccati-double-wrap")
for iv in case.working_intervals:
    rr = np.linspace(iv.lo, iv.hi, 9)[1:-1]
    print(f"Riccati residual on ({iv.lo:.3f}, {iv.hi:.3f}): {np.max(np.abs(riccati_residual(case.beta, rr))):.1e}")
