"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py`` (lines appear in the
terminal even without ``-s``) or ``python3 tests/test_acceptance.py``.
"""

import math
import sys

import numpy as np
import pytest

from conftest import random_factor, random_map
from fbiharm.catalog import (BUILDER_NAMES, CASE_NAMES, build_case, derived_round_sphere_case, glob_factor,
                             glob_rho)
from fbiharm.dsl import parse_expr, profile, to_source
from fbiharm.geometry import bitension_radial, conformal_bitension, f_bitension, tension_radial
from fbiharm.ode import (LinearODE2, kzt_ansatz_coeffs, kzt_q, kzt_solution, kzt_system, kztt_amplitude_phase,
                         kztt_residual, solve_ivp)
from fbiharm.oracle import oracle_bitension, oracle_tension
from fbiharm.profiles import BUILTINS, DEFAULT_EXCLUSION, POSITIVE, REAL_LINE, Interval, Profile, fd_consistency
from fbiharm.verify import compare_oracle, example_2_2_sweep, gauss_curvature_sweep, make_grid, sweep

PI = math.pi
SQ3 = math.sqrt(3)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / (1 + np.abs(b))))


def test_criterion_01_catalog_closed_forms(report):
    names = ["glob", "kzt", "g3", "kztt", "example-2-1", "ps-special", "prop-2-12", "riccati-double-wrap"]
    reps = [sweep(build_case(n)) for n in names]
    bad = [r.summary() for r in reps if r.verdict != "pass"]
    worst = max(r.sup_normalized / r.tol for r in reps)
    report(1, not bad, f"8 cases pass on 512-point grids; worst norm/tol = {worst:.2e}" if not bad else "; ".join(bad))


def test_criterion_02_negative_controls(report):
    ident = sweep(build_case("identity-sphere"), tol=1e-12)
    wrap = build_case("double-wrap-nonbiharmonic")
    harm, bih = sweep(wrap, mode="harmonic"), sweep(wrap, mode="biharmonic")
    ok = (ident.verdict == "pass" and ident.sup <= 1e-12 and harm.verdict == "fail" and bih.verdict == "fail"
          and harm.sup >= 1 and bih.sup >= 1)
    report(2, ok, f"identity sup {ident.sup:.1e}; double wrap tension sup {harm.sup:.3f}, bitension sup {bih.sup:.3f}")


def test_criterion_03_oracle_equivalence(report):
    worst = 0.0
    rng = np.random.default_rng(20240611)
    for _ in range(5):
        m = random_map(rng)
        r = rng.uniform(0.5, 2.0, 100)
        worst = max(worst, rel(oracle_tension(m, r).radial, tension_radial(m, r)),
                    rel(oracle_bitension(m, r).radial, bitension_radial(m, r)))
    failing = []
    for name in CASE_NAMES + BUILDER_NAMES:
        case = build_case(name)
        n = max(1, 100 // len(case.working_intervals))
        rep = compare_oracle(case, make_grid(case, n=n), conformal=False)
        worst = max(worst, rep.sup)
        if rep.sup > 1e-7:
            failing.append(f"{name} {rep.sup:.1e}")
    report(3, not failing and worst <= 1e-7, f"5 random maps + 15 cases, worst relative gap {worst:.2e}"
           + (f"; failing: {failing}" if failing else ""))


def test_criterion_04_conformal_identity(report):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(5):
        m, cf = random_map(rng), random_factor(rng)
        r = rng.uniform(0.5, 2.0, 100)
        worst = max(worst, rel(conformal_bitension(m, cf, r).radial, cf.f(r) * f_bitension(m, cf, r).radial))
    report(4, worst <= 1e-7, f"τ₂(f⁻¹g) vs f·τ₂,f on 5 random pairs, worst {worst:.2e}")


def test_criterion_05_reduction_of_order_pipeline(report):
    rng = np.random.default_rng(11)
    worst, details = 0.0, []
    for _ in range(5):
        C1, C2 = rng.uniform(-2, 2, 2)
        rep = sweep(derived_round_sphere_case(C1=float(C1), C2=float(C2)))
        worst = max(worst, rep.sup_normalized)
        details.append(rep.verdict)
    report(5, worst <= 1e-6 and set(details) == {"pass"}, f"5 random (C1, C2), worst residual {worst:.2e}")


def test_criterion_06_kzt_ansatz(report):
    a = np.array(kzt_ansatz_coeffs())
    want = np.array([-26 - 15 * SQ3, 5 + 3 * SQ3, 1.0])
    lin = float(np.max(np.abs(kzt_system() @ a)))
    t = np.linspace(-3, 3, 301)
    ode = float(np.max(np.abs(LinearODE2(Profile.constant(0.0), kzt_q(3.0), REAL_LINE).residual(kzt_solution(), t))))
    ok = np.allclose(a, want, rtol=1e-13) and lin <= 1e-12 and ode <= 1e-9
    report(6, ok, f"coefficients {a[0]:.6f}, {a[1]:.6f}, {a[2]:g}; system residual {lin:.1e}; ODE residual {ode:.1e}")


def test_criterion_07_kztt_phase(report):
    u, v = kztt_amplitude_phase()
    r = np.linspace(DEFAULT_EXCLUSION, PI - DEFAULT_EXCLUSION, 400)
    # v is based at t = 0, i.e. r = π/2
    phase = float(np.max(np.abs(v(np.log(np.tan(r / 2))) + SQ3 / 2 * PI / 2 - SQ3 / 2 * r)))
    res = float(np.max(np.abs(kztt_residual(u, v, np.linspace(-3, 3, 301)))))
    report(7, phase <= 1e-9 and res <= 1e-9, f"phase gap {phase:.1e}; amplitude equation residual {res:.1e}")


def test_criterion_08_glob_limits(report):
    rho, f = glob_rho(), glob_factor()
    a, b = rho(1e-4), rho(PI - 1e-4)
    c, d = 1 / f(1e-4), 1 / f(PI - 1e-4)
    ok = abs(a - PI / 4) <= 1e-3 and abs(b) <= 1e-3 and c >= 1e3 and d <= 1e-3
    report(8, ok, f"ρ(1e-4)={a:.6f}, ρ(π-1e-4)={b:.2e}, 1/f(1e-4)={c:.2e}, 1/f(π-1e-4)={d:.2e}")


def test_criterion_09_solver_and_jets(report):
    sys_ = LinearODE2(Profile.from_expr(lambda r: 1 / r, POSITIVE), Profile.constant(0.0), POSITIVE)
    sol = solve_ivp(sys_, 1.0, 0.0, 1.0, Interval(1.0, math.e ** 2))
    r = np.linspace(1.0, math.e ** 2, 500)
    err = float(np.max(np.abs(sol(r) - np.log(r))))
    rng = np.random.default_rng(3)
    fd = 0.0
    for name, make in BUILTINS.items():
        p = make()
        lo, hi = max(p.domain.lo, -10), min(p.domain.hi, 10)
        fd = max(fd, fd_consistency(p, rng.uniform(lo + 0.05, hi - 0.05, 100)))
    report(9, err <= 1e-9 and fd <= 1e-5, f"ln r dense-output error {err:.1e}; worst jet/FD gap {fd:.1e}")


def test_criterion_10_dsl_fidelity(report):
    worst, checked, fixpoints = 0.0, 0, True
    for name in CASE_NAMES + BUILDER_NAMES:
        case = build_case(name)
        iv = case.working_intervals[0]
        r = np.linspace(iv.lo, iv.hi, 22)[1:-1]
        for key, built in (("rho", case.map.rho), ("f", case.factor.effective)):
            if key not in case.formulas:
                continue
            src = case.formulas[key]
            ast = parse_expr(src)
            fixpoints &= parse_expr(to_source(ast)) == ast
            worst = max(worst, rel(profile(src, built.domain)(r), built(r)))
            checked += 1
    report(10, worst <= 1e-12 and fixpoints, f"{checked} formulas at 20 points, worst gap {worst:.1e}; "
           f"parse-print-parse fixpoint: {fixpoints}")


def test_criterion_11_open_question_sweeps(report):
    rows = example_2_2_sweep()
    passing = sorted({(r["k"], r["C0"]) for r in rows if r["verdict"] == "pass"})
    curv = gauss_curvature_sweep()
    ok = len(rows) == 125 and all(math.isfinite(r["sup"]) for r in rows) and len(curv) == 5
    report(11, ok, f"Example 2.2 grid: {len(rows)} points, passing (k, C0) = {passing}; "
           f"curvature of λ=√ρ matches {sorted({c['matches'] for c in curv})}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
