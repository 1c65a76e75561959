"""Forward-mode derivative arithmetic: operator algebra, the function
library, and the seeded partial/gradient/jacobian helpers, all checked
against central finite differences."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from fiberdirac import dual as dm
from fiberdirac.dual import Dual

FD_TOL = 1e-7
FD_H = 1e-6


def central_diff(f, x, h=FD_H):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def test_arithmetic_values_match_floats():
    a, b = Dual(1.7, 1.0), Dual(-0.4, 0.0)
    assert dm.value_of(a + b) == pytest.approx(1.3)
    assert dm.value_of(a * b) == pytest.approx(-0.68)
    assert dm.value_of(a - b) == pytest.approx(2.1)
    assert dm.value_of(a / b) == pytest.approx(1.7 / -0.4)
    assert dm.value_of(2.0 + a) == pytest.approx(3.7)
    assert dm.value_of(2.0 - a) == pytest.approx(0.3)
    assert dm.value_of(3.0 * a) == pytest.approx(5.1)
    assert dm.value_of(1.0 / a) == pytest.approx(1.0 / 1.7)
    assert dm.value_of(-a) == pytest.approx(-1.7)


def test_product_and_quotient_rules():
    x = Dual(0.83, 1.0)
    y = x * x * x
    assert y.eps == pytest.approx(3 * 0.83 ** 2, rel=1e-12)
    q = (x * x) / (1.0 + x)
    expected = (2 * 0.83 * (1 + 0.83) - 0.83 ** 2) / (1 + 0.83) ** 2
    assert q.eps == pytest.approx(expected, rel=1e-12)


def test_integer_power_handles_negative_base():
    x = Dual(-1.2, 1.0)
    y = x ** 3
    assert y.re == pytest.approx((-1.2) ** 3)
    assert y.eps == pytest.approx(3 * (-1.2) ** 2, rel=1e-12)


def test_scalar_power():
    x = Dual(2.3, 1.0)
    y = x ** 0.5
    assert y.eps == pytest.approx(0.5 * 2.3 ** (-0.5), rel=1e-12)


@pytest.mark.parametrize("name", sorted(dm.FUNCTIONS))
def test_function_library_derivatives(name):
    fn = dm.FUNCTIONS[name]
    x0 = {"asin": 0.4, "acos": 0.4, "log": 1.3, "sqrt": 1.3}.get(name, 0.7)
    out = fn(Dual(x0, 1.0))
    ref = central_diff(lambda t: dm.value_of(fn(t)), x0)
    assert out.eps == pytest.approx(ref, rel=FD_TOL, abs=FD_TOL)


def test_functions_pass_plain_floats_through():
    assert dm.sin(0.3) == pytest.approx(math.sin(0.3))
    assert dm.sqrt(2.0) == pytest.approx(math.sqrt(2.0))


def test_value_of_is_identity_on_floats():
    assert dm.value_of(2.5) == 2.5
    assert dm.value_of(Dual(2.5, 99.0)) == 2.5


def test_partial_and_gradient():
    f = lambda p: dm.sin(p[0]) * p[1] + p[1] * p[1]
    point = [0.6, -1.1]
    assert dm.partial(f, point, 0) == pytest.approx(
        math.cos(0.6) * -1.1, rel=1e-12)
    grad = dm.gradient(f, point)
    assert grad[1] == pytest.approx(math.sin(0.6) + 2 * -1.1, rel=1e-12)


def test_jacobian_shape_and_values():
    f = lambda p: [p[0] * p[1], p[0] + dm.exp(p[1])]
    jac = dm.jacobian(f, [0.5, 0.25])
    assert len(jac) == 2 and len(jac[0]) == 2
    assert jac[0][0] == pytest.approx(0.25)
    assert jac[0][1] == pytest.approx(0.5)
    assert jac[1][1] == pytest.approx(math.exp(0.25), rel=1e-12)


def test_directional_derivative_is_linear_combination():
    f = lambda p: p[0] * p[0] + 3.0 * p[1]
    point, direction = [1.2, 0.3], [0.5, -2.0]
    want = 2 * 1.2 * 0.5 + 3.0 * -2.0
    assert dm.directional(f, point, direction) == pytest.approx(want,
                                                                rel=1e-12)


def test_second_partials_commute():
    f = lambda p: dm.sin(p[0] * p[1]) + p[0] ** 3
    assert dm.second_partial(f, [0.7, 1.3], 0, 1) == pytest.approx(
        dm.second_partial(f, [0.7, 1.3], 1, 0), rel=1e-9)


@given(st.floats(min_value=-2.0, max_value=2.0),
       st.floats(min_value=-2.0, max_value=2.0))
@settings(max_examples=60, deadline=None)
def test_composite_derivative_matches_finite_difference(a, b):
    f = lambda t: dm.sin(t * t + a) * dm.exp(0.3 * t) + b * t
    out = f(Dual(0.9, 1.0))
    ref = central_diff(lambda t: dm.value_of(f(t)), 0.9)
    assert out.eps == pytest.approx(ref, rel=1e-6, abs=1e-6)
