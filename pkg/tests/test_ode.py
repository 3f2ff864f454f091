import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fbiharm import jets as J
from fbiharm.catalog import build_case, glob_rho
from fbiharm.errors import NonBiharmonicInput, SingularPoint, StepFailure, XVanishes
from fbiharm.geometry import RotSymMap, WarpedSurface, tension_profile
from fbiharm.catalog import _sphere
from fbiharm.ode import (LinearODE2, assemble_system, cauchy_euler_rho, kzt_ansatz_coeffs, kzt_q, kzt_solution,
                         kzt_system, kztt_amplitude_phase, kztt_phase_closed, kztt_residual, locate_zeros,
                         prop212_rho, reduction_of_order_factor, riccati_residual, sign_changes, solve_ivp,
                         to_t_coordinates)
from fbiharm.profiles import OPEN_0_PI, POSITIVE, REAL_LINE, Interval, Profile, identity

PI = math.pi
SQ3 = math.sqrt(3)
EULER = LinearODE2(Profile.from_expr(lambda r: 1 / r, POSITIVE), Profile.constant(0.0), POSITIVE)
GL2 = LinearODE2(Profile.constant(0.0), Profile.from_expr(lambda t: -4 * J.exp(2 * t) / (1 + J.exp(2 * t)), REAL_LINE),
                 REAL_LINE)


def sphere_map(rho, k, dom=OPEN_0_PI, lam=None):
    target = _sphere() if lam is None else lam
    return RotSymMap(_sphere(dom), target, Profile.from_expr(rho, dom), k)


def test_euler_solutions():
    one = solve_ivp(EULER, 1.0, 1.0, 0.0, Interval(0.1, 10.0))
    np.testing.assert_allclose(one(np.linspace(0.1, 10, 20)), 1.0, atol=1e-12)
    log = solve_ivp(EULER, 1.0, 0.0, 1.0, Interval(0.1, 10.0))
    assert log(math.e) == pytest.approx(1.0, abs=1e-9)
    r = np.geomspace(0.1, 10, 40)
    np.testing.assert_allclose(log(r), np.log(r), atol=1e-9)
    np.testing.assert_allclose(log.derivative(r), 1 / r, rtol=1e-8)


def test_gl2_closed_solution():
    sol = solve_ivp(GL2, 0.0, 2.0, 2.0, Interval(-2.0, 1.0))
    assert sol(1.0) == pytest.approx(1 + math.e ** 2, abs=1e-8)
    t = np.linspace(-2, 1, 15)
    np.testing.assert_allclose(sol(t), 1 + np.exp(2 * t), rtol=1e-9)
    assert np.max(np.abs(sol.residual(t))) <= 1e-8


def test_superposition():
    a = solve_ivp(GL2, 0.0, 1.0, 0.0, Interval(-1.5, 1.5))
    b = solve_ivp(GL2, 0.0, 0.0, 1.0, Interval(-1.5, 1.5))
    combo = 0.7 * a.y - 2.5 * b.y
    t = np.linspace(-1.4, 1.4, 30)
    assert np.max(np.abs(GL2.residual(combo, t))) <= 1e-9
    both = solve_ivp(GL2, 0.0, 0.7, -2.5, Interval(-1.5, 1.5))
    np.testing.assert_allclose(combo(t), both(t), atol=1e-9)


def test_tolerance_convergence():
    r = np.geomspace(0.2, 5, 25)
    errs = []
    for tol in (1e-6, 1e-8, 1e-10, 1e-12):
        s = solve_ivp(EULER, 1.0, 2.0, 3.0, Interval(0.2, 5.0), tol=tol)
        errs.append(np.max(np.abs(s(r) - (2 + 3 * np.log(r)))))
    assert all(b <= a * 1.0001 for a, b in zip(errs, errs[1:]))
    assert errs[-1] <= 1e-9


def test_solver_rejects_singularities_and_bad_starts():
    sys = LinearODE2(Profile.from_expr(lambda r: 1 / r, POSITIVE, (1.0,)), Profile.constant(0.0), POSITIVE)
    with pytest.raises(StepFailure):
        solve_ivp(sys, 2.0, 1.0, 0.0, Interval(0.5, 3.0))
    with pytest.raises(ValueError):
        solve_ivp(EULER, 20.0, 1.0, 0.0, Interval(0.5, 3.0))


def test_assembled_coefficients():
    flat = RotSymMap(WarpedSurface(POSITIVE, identity(POSITIVE), "plane"),
                     WarpedSurface(POSITIVE, Profile.from_expr(J.sqrt, POSITIVE), "cone"),
                     Profile.from_expr(lambda r: J.log(1 + r * r), POSITIVE), 1.0)
    s = assemble_system(flat)
    r = np.array([0.3, 1.0, 4.0])
    np.testing.assert_allclose(s.p(r), 1 / r, rtol=1e-14)
    np.testing.assert_allclose(s.q(r), 0.0, atol=1e-14)

    r = np.linspace(0.1, 1.4, 9)
    s = assemble_system(sphere_map(lambda r: 2 * r, 1, Interval(0, PI / 2)))
    np.testing.assert_allclose(s.p(r), 1 / np.tan(r), rtol=1e-13)
    np.testing.assert_allclose(s.q(r), -np.cos(4 * r) / np.sin(r) ** 2, rtol=1e-12, atol=1e-13)

    s = assemble_system(RotSymMap(_sphere(), _sphere(), glob_rho(), 2))
    r = np.linspace(0.2, 2.9, 9)
    np.testing.assert_allclose(s.q(r), -4 * np.sin(r / 2) ** 2 / np.sin(r) ** 2, rtol=1e-11)


@pytest.mark.parametrize("A,k", [(1.0, 2.0), (0.5, 1.0), (1.5, 0.7)])
def test_t_coordinates_for_linear_rho(A, k):
    hi = min(PI, PI / A)
    m = sphere_map(lambda r: A * r, k, Interval(0, hi))
    tc = to_t_coordinates(assemble_system(m), m, Interval(0.2, hi - 0.2), basepoint=PI / 2)
    r = np.linspace(0.3, hi - 0.3, 7)
    t = tc.t_of_r(r)
    np.testing.assert_allclose(t, np.log(np.tan(r / 2)), atol=1e-12)
    np.testing.assert_allclose(tc.system.q(t), -k * k * np.cos(4 * A * np.arctan(np.exp(t))), rtol=1e-9, atol=1e-12)
    np.testing.assert_allclose(tc.system.p(t), 0.0, atol=1e-12)


def test_t_coordinates_gl2():
    m = RotSymMap(_sphere(), _sphere(), glob_rho(), 2)
    tc = to_t_coordinates(assemble_system(m), m, Interval(0.2, 2.9), basepoint=PI / 2)
    t = np.linspace(-2, 2, 11)
    np.testing.assert_allclose(tc.system.q(t), -4 * np.exp(2 * t) / (1 + np.exp(2 * t)), rtol=1e-10)


def test_unit_warp_leaves_the_system_alone():
    sys = LinearODE2(Profile.constant(0.3), Profile.from_expr(lambda r: J.cos(r), REAL_LINE), REAL_LINE)
    tc = to_t_coordinates(sys, Profile.constant(1.0), Interval(-2.0, 2.0), basepoint=0.0)
    t = np.linspace(-1.5, 1.5, 7)
    np.testing.assert_allclose(tc.t_of_r(t), t, atol=1e-14)
    np.testing.assert_allclose(tc.system.q(t), np.cos(t), rtol=1e-13)
    np.testing.assert_allclose(tc.system.p(t), 0.3, rtol=1e-13)


def test_solving_in_r_and_in_t_agree():
    m = RotSymMap(_sphere(), _sphere(), glob_rho(), 2)
    sys = assemble_system(m)
    tc = to_t_coordinates(sys, m, Interval(0.3, 2.8), basepoint=PI / 2)
    in_r = solve_ivp(sys, PI / 2, 1.0, 0.5, Interval(0.4, 2.7))
    # dy/dt = σ dy/dr, and σ(π/2) = 1
    in_t = solve_ivp(tc.system, 0.0, 1.0, 0.5, Interval(tc.t_of_r(0.4), tc.t_of_r(2.7)))
    r = np.linspace(0.4, 2.7, 17)
    np.testing.assert_allclose(in_t(tc.t_of_r(r)), in_r(r), atol=1e-8)


def test_cauchy_euler_rho():
    rho = cauchy_euler_rho(1.0, 0, 2, 1, 0)
    assert rho(1.0) == pytest.approx(math.log(2), abs=1e-15)
    r = np.geomspace(0.05, 20, 9)
    np.testing.assert_allclose(cauchy_euler_rho(2.0, 0, 2, 1, 0)(r), np.log(r) ** 2 + np.log1p(r * r), rtol=1e-13)
    np.testing.assert_allclose(cauchy_euler_rho(0.0, 5, 0, 0, 0)(r), 5.0)
    assert cauchy_euler_rho(0.0, 0, 0, 0, 1)(1.0) == pytest.approx(0.0, abs=1e-14)


def test_prop212_rho():
    rho = prop212_rho(1.0, 1, 0, 0, 1)
    r = np.linspace(0.3, 2.8, 9)
    t = np.log(np.tan(r / 2))
    np.testing.assert_allclose(rho(r), t ** 6 / 30 + t ** 4 / 6 + 0.75 * t ** 2 + 1, rtol=1e-13)
    np.testing.assert_allclose(prop212_rho(0.0, 0, 0, 0, 0)(r), 0.0)
    assert prop212_rho(1.7, 2, 3, 4, 5)(PI / 2) == pytest.approx(5.0, abs=1e-13)


def test_riccati_residual_of_the_zero_function():
    zero = Profile.constant(0.0, Interval(0, PI / 2))
    assert riccati_residual(zero, PI / 6) == pytest.approx(0.0, abs=1e-15)
    assert riccati_residual(zero, PI / 2 - 1e-9) == pytest.approx(-3.0, abs=1e-8)
    with pytest.raises(SingularPoint):
        riccati_residual(zero, PI / 2)


def test_riccati_residual_of_a_solved_factor():
    c = build_case("riccati-double-wrap")
    for iv in c.working_intervals:
        r = np.linspace(iv.lo, iv.hi, 50)[1:-1]
        assert np.max(np.abs(riccati_residual(c.beta, r))) <= 1e-6


def test_kzt_ansatz():
    a0, a1, a2 = kzt_ansatz_coeffs()
    assert a0 == pytest.approx(-26 - 15 * SQ3, rel=1e-12)
    assert a1 == pytest.approx(5 + 3 * SQ3, rel=1e-12)
    assert a2 == 1.0
    assert np.max(np.abs(kzt_system() @ np.array([a0, a1, a2]))) <= 1e-12
    y = kzt_solution()
    sys = LinearODE2(Profile.constant(0.0), kzt_q(3.0), REAL_LINE)
    t = np.linspace(-3, 3, 31)
    assert np.max(np.abs(sys.residual(y, t)) / (1 + np.abs(y(t)))) <= 1e-10


def test_kztt_amplitude_and_phase():
    u, v = kztt_amplitude_phase()
    assert u(0.0) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert v.d(0.0, 1) == pytest.approx(SQ3 / 2, rel=1e-14)
    t = np.linspace(-3, 3, 61)
    assert np.max(np.abs(kztt_residual(u, v, t))) <= 1e-9
    np.testing.assert_allclose(v(t), kztt_phase_closed(t) - SQ3 / 2 * PI / 2, atol=1e-11)
    r = np.linspace(0.1, 3.0, 17)
    np.testing.assert_allclose(v(np.log(np.tan(r / 2))), SQ3 / 2 * (r - PI / 2), atol=1e-11)


def test_reduction_of_order_on_the_round_sphere():
    m = build_case("derived-round-sphere").map
    cf = reduction_of_order_factor(m, 1.0, 2.0, basepoint=PI / 2, interval=Interval(0.2, 2.9))
    r = np.linspace(0.3, 2.8, 13)
    np.testing.assert_allclose(cf.f(r), 1 + 2 * np.log(np.tan(r / 2)), atol=1e-10)
    const = reduction_of_order_factor(m, 3.0, 0.0, interval=Interval(0.2, 2.9))
    np.testing.assert_allclose(const.f(r), 3.0)


@pytest.mark.parametrize("name", ["derived-round-sphere", "example-2-1", "stcoy"])
def test_reduction_of_order_solves_the_linear_system(name):
    m = build_case(name).map
    iv = build_case(name).working_intervals[0].shrink(0.05)
    cf = reduction_of_order_factor(m, 0.5, 1.3, interval=iv)
    y = tension_profile(m) * cf.f
    r = np.linspace(iv.lo, iv.hi, 40)[1:-1]
    res = assemble_system(m).residual(y, r)
    assert np.max(np.abs(res) / (1 + np.abs(y(r)))) <= 1e-6


def test_reduction_of_order_rejects_bad_input():
    wrap = sphere_map(lambda r: 2 * r, 1, Interval(0, PI / 2))
    # ρ = r with k = 2 has x = -3 cot r, which vanishes at π/2
    with pytest.raises(XVanishes):
        reduction_of_order_factor(sphere_map(lambda r: r, 2), 1, 1, interval=Interval(0.3, 2.8))
    with pytest.raises(NonBiharmonicInput):
        reduction_of_order_factor(wrap, 1, 1, interval=Interval(0.1, 0.7))
    with pytest.raises(ValueError):
        reduction_of_order_factor(wrap, 0, 0, interval=Interval(0.1, 0.7))


def test_sign_changes_tell_zeros_from_poles():
    p = Profile.from_expr(lambda r: J.cos(r) / (r - 2.0), Interval(0, 3.0), (2.0,))
    found = sign_changes(p, Interval(0.1, 2.9))
    assert [k for _, k in found] == ["zero", "pole"]
    assert found[0][0] == pytest.approx(PI / 2, abs=1e-13)
    assert found[1][0] == pytest.approx(2.0, abs=1e-12)
    assert locate_zeros(p, Interval(0.1, 2.9)) == [pytest.approx(PI / 2, abs=1e-13)]


@given(st.floats(0.3, 2.8))
def test_locate_zeros_of_a_shifted_sine(c):
    p = Profile.from_expr(lambda r: J.sin(r - c), Interval(0.0, 3.1))
    zeros = locate_zeros(p, Interval(0.01, 3.09))
    assert len(zeros) == 1 and zeros[0] == pytest.approx(c, abs=1e-12)
