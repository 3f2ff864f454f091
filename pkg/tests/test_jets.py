import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fbiharm import jets as J
from fbiharm.jets import Jet

mp.mp.dps = 30
reals = st.floats(-2.0, 2.0, allow_nan=False)


def derivs_mp(fn, x, n=4):
    return [float(mp.diff(fn, mp.mpf(x), k)) for k in range(n + 1)]


@pytest.mark.parametrize("jfn, mfn, x", [
    (J.sin, mp.sin, 0.7), (J.cos, mp.cos, -1.3), (J.tan, mp.tan, 0.4), (J.cot, mp.cot, 1.1),
    (J.exp, mp.exp, 0.3), (J.log, mp.log, 1.7), (J.sqrt, mp.sqrt, 2.5), (J.sinh, mp.sinh, 0.9),
    (J.cosh, mp.cosh, -0.4), (J.arctan, mp.atan, 0.6), (J.arcsin, mp.asin, 0.3), (J.arccos, mp.acos, -0.2),
])
def test_elementary_jets_match_high_precision_derivatives(jfn, mfn, x):
    got = jfn(Jet.variable(x, 4)).derivatives()
    want = derivs_mp(mfn, x)
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


def test_sine_at_half_pi():
    d = J.sin(Jet.variable(math.pi / 2, 4)).derivatives()
    np.testing.assert_allclose(d, [1, 0, -1, 0, 1], atol=1e-15)
    assert J.sin(Jet.variable(math.pi / 2, 4)).coeffs[2] == pytest.approx(-0.5)


def test_constant_jet():
    c = Jet.constant(1.0, 4)
    np.testing.assert_array_equal(c.coeffs, [1, 0, 0, 0, 0])


def test_composite_against_mpmath():
    f = lambda u: J.log(J.tan(u / 2)) ** 2 / 4 - J.log(J.sin(u)) + 1
    g = lambda u: mp.log(mp.tan(u / 2)) ** 2 / 4 - mp.log(mp.sin(u)) + 1
    np.testing.assert_allclose(f(Jet.variable(2.2, 4)).derivatives(), derivs_mp(g, 2.2), rtol=1e-12)


def test_real_and_integer_powers():
    x = Jet.variable(1.3, 4)
    np.testing.assert_allclose((x ** 3).derivatives(), [1.3 ** 3, 3 * 1.3 ** 2, 6 * 1.3, 6, 0], rtol=1e-14)
    np.testing.assert_allclose((x ** -1.5).derivatives(), derivs_mp(lambda u: u ** -1.5, 1.3), rtol=1e-12)


def test_vectorized_shape():
    r = np.linspace(0.1, 1, 7)
    jt = J.sin(Jet.variable(r, 3))
    assert jt.shape == (7,) and jt.order == 3
    np.testing.assert_allclose(jt.derivative(1), np.cos(r), rtol=1e-15)


def test_order_errors():
    x = Jet.variable(0.5, 2)
    with pytest.raises(ValueError):
        x.derivative(3)
    with pytest.raises(ValueError):
        x.truncate(3)
    with pytest.raises(ValueError):
        Jet.constant(1.0, 0).deriv()


def test_series_compose_and_revert():
    x = Jet.variable(0.4, 4)
    inner = J.sin(x)
    outer = J.exp(Jet.variable(inner.value, 4))
    np.testing.assert_allclose(J.series_compose(outer, inner).coeffs, J.exp(J.sin(x)).coeffs, rtol=1e-14)
    s = J.exp(x)
    back = J.revert(s, 0.4)  # inverse is log at e^0.4
    np.testing.assert_allclose(back.coeffs, J.log(Jet.variable(math.exp(0.4), 4)).coeffs, rtol=1e-12)


@given(reals, reals)
def test_product_rule(a, b):
    x = Jet.variable(a, 4)
    u, v = J.sin(x) + b, J.exp(0.3 * x)
    lhs = (u * v).deriv()
    rhs = u.deriv() * v.truncate(3) + u.truncate(3) * v.deriv()
    np.testing.assert_allclose(lhs.coeffs, rhs.coeffs, rtol=1e-12, atol=1e-12)


@given(st.floats(0.1, 5.0))
def test_exp_log_inverse(a):
    x = Jet.variable(a, 4)
    np.testing.assert_allclose(J.exp(J.log(x)).coeffs, x.coeffs, rtol=1e-12, atol=1e-12)


@given(reals)
def test_quotient_inverts_product(a):
    x = Jet.variable(a, 4)
    u, v = J.cos(x) + 3, J.exp(x)
    np.testing.assert_allclose(((u * v) / v).coeffs, u.coeffs, rtol=1e-12, atol=1e-12)


def test_absolute_value_sides_and_kink():
    left = J.absolute(J.sin(Jet.variable(-0.5, 4)))
    np.testing.assert_allclose(left.coeffs, (-J.sin(Jet.variable(-0.5, 4))).coeffs)
    assert not np.all(np.isfinite(J.absolute(Jet.variable(0.0, 4)).coeffs))
