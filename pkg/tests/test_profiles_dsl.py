import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fbiharm import jets as J
from fbiharm.catalog import build_case, glob_factor, kzt_factor, kztt_factor
from fbiharm.dsl import (FUNCTIONS, BinOp, Call, Const, Neg, Num, Pow, Var, evaluate, parse_expr, profile,
                         to_source)
from fbiharm.errors import ExprSyntaxError, OutOfDomain, SingularPoint, UnknownIdentifier
from fbiharm.jets import Jet
from fbiharm.profiles import (BUILTINS, DEFAULT_EXCLUSION, OPEN_0_PI, POSITIVE, REAL_LINE, Interval, Profile,
                              fd_consistency, jet_eval, log_tan_half, sine)

PI = math.pi


# intervals and profiles -------------------------------------------------------------

def test_interval_validation_and_split():
    with pytest.raises(ValueError):
        Interval(1.0, 1.0)
    iv = Interval(0.0, PI)
    parts = iv.split([PI / 2, 5.0], eps=0.01)
    assert [p.as_tuple() for p in parts] == [(0.0, PI / 2 - 0.01), (PI / 2 + 0.01, PI)]
    assert POSITIVE.midpoint == 1.0 and REAL_LINE.midpoint == 0.0 and not POSITIVE.finite


def test_jet_eval_sine_and_constant():
    d = jet_eval(sine(OPEN_0_PI), PI / 2).derivatives()
    np.testing.assert_allclose(d[:3], [1.0, 0.0, -1.0], atol=1e-15)
    c = jet_eval(Profile.constant(1.0), 0.3)
    np.testing.assert_array_equal(c.coeffs, [1, 0, 0, 0, 0])


def test_log_tan_half_at_equator_against_finite_differences():
    p = log_tan_half()
    jt = jet_eval(p, PI / 2)
    h = 1e-5
    fd = (math.log(math.tan((PI / 2 + h) / 2)) - math.log(math.tan((PI / 2 - h) / 2))) / (2 * h)
    assert jt.value == pytest.approx(0.0, abs=1e-15)
    assert jt.derivative(1) == pytest.approx(fd, rel=1e-9)
    assert jt.derivative(1) == pytest.approx(1.0, rel=1e-14)


def test_jet_eval_domain_and_singularity_errors():
    p = Profile.from_expr(lambda r: 1 / J.cos(r), OPEN_0_PI, (PI / 2,), "sec")
    with pytest.raises(OutOfDomain):
        jet_eval(p, 4.0)
    with pytest.raises(SingularPoint):
        jet_eval(p, PI / 2 + 1e-3, exclusion=DEFAULT_EXCLUSION)
    jet_eval(p, PI / 2 + 0.1, exclusion=DEFAULT_EXCLUSION)


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_builtin_jets_agree_with_central_differences(name, rng):
    p = BUILTINS[name]()
    lo, hi = (max(p.domain.lo, -10), min(p.domain.hi, 10))
    pts = rng.uniform(lo + 0.05, hi - 0.05, 100)
    assert fd_consistency(p, pts) <= 1e-5


def test_profile_algebra_and_composition():
    s = sine(REAL_LINE)
    r = np.linspace(0.2, 1.0, 5)
    np.testing.assert_allclose((s * s + 1.0)(r), np.sin(r) ** 2 + 1, rtol=1e-15)
    np.testing.assert_allclose(s.compose(s)(r), np.sin(np.sin(r)), rtol=1e-15)
    np.testing.assert_allclose(s.deriv()(r), np.cos(r), rtol=1e-15)


# DSL ---------------------------------------------------------------------------------

def test_parse_examples():
    assert parse_expr("sin(r)^2") == Pow(Call("sin", Var("r")), Num(2.0))
    parse_expr("1 + 4*ln(tan(r/2))")
    with pytest.raises(ExprSyntaxError):
        parse_expr("2r")
    with pytest.raises(UnknownIdentifier):
        parse_expr("foo(r)")
    with pytest.raises(ExprSyntaxError):
        parse_expr("")
    with pytest.raises(ExprSyntaxError):
        parse_expr("sin(r")


def test_precedence_and_unary_minus():
    p = profile("-r^2 + 2*3^2/6 - 1")
    assert p(np.array([2.0]))[0] == pytest.approx(-4 + 3 - 1)
    assert profile("2^3^2")(np.array([0.0]))[0] == pytest.approx(2.0 ** 9)


def test_compiled_profiles_match_builtins():
    r = np.linspace(0.05, PI - 0.05, 40)
    np.testing.assert_allclose(profile("sin(r)", OPEN_0_PI).jet(r).coeffs, sine(OPEN_0_PI).jet(r).coeffs,
                               rtol=1e-12, atol=1e-12)
    assert profile("(1+r^2)^2/4", POSITIVE)(np.array([1.0]))[0] == 1.0


def test_kztt_factor_text_matches_catalog():
    p = profile("abs(tan(r)*sin(sqrt(3)/2*r)/sqrt(sin(r)))", OPEN_0_PI, (PI / 2,))
    r = np.linspace(0.05, PI - 0.05, 20)
    r = r[np.abs(r - PI / 2) > 0.02]
    np.testing.assert_allclose(p(r), np.abs(kztt_factor()(r)), rtol=1e-12)


def test_abs_raises_at_a_sign_change():
    p = profile("abs(r - 1)", Interval(0, 2))
    with pytest.raises(SingularPoint):
        jet_eval(p, 1.0)
    assert jet_eval(p, 0.5).derivative(1) == -1.0
    assert jet_eval(p, 1.5).derivative(1) == 1.0


def test_variable_name_for_target_warps():
    lam = profile("sqrt(rho+1)", REAL_LINE, var_name="rho")
    assert lam(np.array([3.0]))[0] == 2.0
    with pytest.raises(UnknownIdentifier):
        parse_expr("sqrt(r)", var_name="rho")


# property tests ------------------------------------------------------------------------

leaf = st.one_of(st.floats(0, 1e3, allow_nan=False, allow_infinity=False).map(Num), st.just(Const("pi")),
                 st.just(Var("r")))
ast = st.recursive(leaf, lambda kids: st.one_of(
    kids.map(Neg),
    st.tuples(st.sampled_from(sorted(FUNCTIONS)), kids).map(lambda t: Call(*t)),
    st.tuples(st.sampled_from("+-*/"), kids, kids).map(lambda t: BinOp(*t)),
    st.tuples(kids, kids).map(lambda t: Pow(*t)),
), max_leaves=12)


@given(ast)
def test_parse_print_parse_is_a_fixpoint(node):
    text = to_source(node)
    again = parse_expr(text)
    assert again == node
    assert to_source(again) == text


@given(st.floats(0.2, 1.2))
def test_dsl_jets_equal_builtin_composition(x):
    src = "exp(sin(r))*sqrt(1+r^2) - ln(cos(r)/2)"
    got = evaluate(parse_expr(src), Jet.variable(x, 4))
    u = Jet.variable(x, 4)
    want = J.exp(J.sin(u)) * J.sqrt(1 + u * u) - J.log(J.cos(u) / 2)
    np.testing.assert_allclose(got.coeffs, want.coeffs, rtol=1e-12, atol=1e-12)


def test_catalog_formulas_agree_with_constructions():
    r = np.linspace(0.07, PI - 0.07, 20)
    glob = build_case("glob")
    np.testing.assert_allclose(profile(glob.formulas["f"], OPEN_0_PI)(r), glob_factor()(r), rtol=1e-12)
    rr = r[np.abs(r - PI / 2) > 0.02]
    np.testing.assert_allclose(np.abs(profile(build_case("kzt").formulas["f"], OPEN_0_PI)(rr)),
                               np.abs(kzt_factor(1)(rr)), rtol=1e-12)
