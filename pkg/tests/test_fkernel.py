"""Scalar kernel families and their descriptor algebra."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiv import (
    convex_pow,
    custom_f,
    dual_k,
    inv_pow,
    make_builtin,
    neg_log,
    neg_pow,
    parse_f_spec,
    renyi_alpha_of,
    renyi_f,
    ExtendedReal,
    POS_INF,
)


def test_neg_log_values_and_limits():
    f = neg_log()
    assert f.fn(np.array([1.0]))[0] == 0.0
    assert f.limit_at_zero.is_pos_inf
    assert f.limit_at_infinity.is_neg_inf
    assert f.anti_monotone


def test_neg_pow_half():
    f = neg_pow(0.5)
    assert f.fn(np.array([4.0]))[0] == pytest.approx(-2.0)
    assert f.limit_at_zero == ExtendedReal.finite(0.0)


def test_inv_pow_minus_one():
    f = inv_pow(-1.0)
    assert f.fn(np.array([2.0]))[0] == pytest.approx(0.5)
    assert f.limit_at_zero.is_pos_inf


def test_convex_pow_range():
    f = convex_pow(1.5)
    assert f.fn(np.array([4.0]))[0] == pytest.approx(8.0)
    for bad in (0.5, 2.5):
        with pytest.raises(ValueError):
            convex_pow(bad)


def test_builtin_parameter_ranges():
    with pytest.raises(ValueError):
        neg_pow(0.0)
    with pytest.raises(ValueError):
        neg_pow(1.5)
    with pytest.raises(ValueError):
        inv_pow(0.0)
    with pytest.raises(ValueError):
        inv_pow(-1.5)


def test_make_builtin_dispatch():
    assert make_builtin("neg_log").name == neg_log().name
    assert make_builtin("neg_pow", 0.5).name == neg_pow(0.5).name
    with pytest.raises(ValueError):
        make_builtin("nope")


# ---- duality k(x) = -f(1/x) ----


def test_dual_of_neg_log_is_itself():
    f = neg_log()
    k = dual_k(f)
    x = np.geomspace(1e-3, 1e3, 50)
    assert np.allclose(k.fn(x), f.fn(x), atol=1e-12)


def test_dual_of_renyi_exponent_algebra():
    # f = x^{(1-a)/a} for a > 1 maps to -x^{(a-1)/a}, a NegPower whose
    # exponent solves 1/a + 1/b = 2
    a = 2.0
    f = renyi_f(a)
    k = dual_k(f)
    b = 1.0 / (2.0 - 1.0 / a)
    x = np.geomspace(1e-2, 1e2, 40)
    assert np.allclose(k.fn(x), -(x ** ((1.0 - b) / b)), atol=1e-12)


@given(st.floats(min_value=0.55, max_value=0.95))
@settings(max_examples=20, deadline=None)
def test_dual_is_involution(alpha):
    f = renyi_f(alpha)
    ff = dual_k(dual_k(f))
    x = np.geomspace(1e-3, 1e3, 30)
    assert np.allclose(ff.fn(x), f.fn(x), rtol=1e-12)


# ---- renyi_f ----


def test_renyi_two_is_inverse_square_root():
    f = renyi_f(2.0)
    x = np.geomspace(1e-2, 1e2, 20)
    assert np.allclose(f.fn(x), x ** (-0.5), atol=1e-14)
    assert f.anti_monotone


def test_renyi_below_one_is_negative_power():
    # alpha = 1/2 -> f(x) = -x^{(1-a)/a} = -x
    f = renyi_f(0.5)
    x = np.array([4.0])
    assert f.fn(x)[0] == pytest.approx(-4.0)


def test_renyi_alpha_recovery():
    for a in (0.5, 0.75, 2.0, 3.0):
        assert renyi_alpha_of(renyi_f(a)) == pytest.approx(a)
    assert renyi_alpha_of(neg_log()) is None


def test_renyi_rejects_out_of_range():
    for a in (0.3, 1.0, np.inf):
        with pytest.raises(ValueError):
            renyi_f(a)


def test_anti_monotone_on_grid():
    x = np.geomspace(1e-6, 1e6, 1000)
    for f in (neg_log(), renyi_f(0.5), renyi_f(2.0), inv_pow(-0.5)):
        y = f.fn(x)
        assert np.all(np.diff(y) <= 1e-12), f.name


# ---- custom descriptors ----


def test_custom_f_identity_kernel():
    # flags are caller-declared, so construction warns
    with pytest.warns(UserWarning):
        f = custom_f(
            "identity",
            lambda x: x,
            limit_at_zero=ExtendedReal.finite(0.0),
            limit_at_infinity=POS_INF,
            anti_monotone=False,
            operator_convex=False,
        )
    assert f.fn(np.array([3.0]))[0] == 3.0
    assert not f.anti_monotone


# ---- spec strings ----


def test_parse_f_spec():
    assert parse_f_spec("neg_log").name == neg_log().name
    assert parse_f_spec("renyi:2").name == renyi_f(2.0).name
    assert parse_f_spec("neg_pow:0.5").name == neg_pow(0.5).name
    assert parse_f_spec("inv_pow:-1").name == inv_pow(-1.0).name
    for bad in ("renyi", "renyi:x", "frobnicate:1", ""):
        with pytest.raises(ValueError):
            parse_f_spec(bad)
