import math

import pytest

from qdiv import NEG_INF, POS_INF, ExtendedReal


def test_finite_round_trip():
    x = ExtendedReal.finite(1.5)
    assert x.is_finite
    assert x.value == 1.5
    assert x.as_float() == 1.5
    assert x.to_json() == 1.5
    assert ExtendedReal.from_json(1.5) == x


def test_infinities():
    assert POS_INF.is_pos_inf and not POS_INF.is_finite
    assert NEG_INF.is_neg_inf
    assert POS_INF.as_float() == math.inf
    assert NEG_INF.as_float() == -math.inf
    assert POS_INF.to_json() == "inf"
    assert NEG_INF.to_json() == "-inf"
    assert ExtendedReal.from_json("inf") is POS_INF
    assert ExtendedReal.from_json("-inf") is NEG_INF


def test_value_raises_on_infinite():
    with pytest.raises(ValueError):
        _ = POS_INF.value


def test_finite_rejects_non_finite():
    with pytest.raises(ValueError):
        ExtendedReal.finite(math.inf)
    with pytest.raises(ValueError):
        ExtendedReal.finite(math.nan)
    with pytest.raises(ValueError):
        ExtendedReal.from_float(math.nan)


def test_from_float_classifies():
    assert ExtendedReal.from_float(math.inf) is POS_INF
    assert ExtendedReal.from_float(-math.inf) is NEG_INF
    assert ExtendedReal.from_float(2.0) == ExtendedReal.finite(2.0)


def test_negation():
    assert -POS_INF is NEG_INF
    assert -NEG_INF is POS_INF
    assert (-ExtendedReal.finite(3.0)).value == -3.0
