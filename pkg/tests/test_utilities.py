import math

import pytest

from p3fox.utilities.common import (
    is_near_integer,
    nearest_integer,
    parse_complex,
    parse_real,
    relative_difference,
)
from p3fox.utilities.core import (
    euler_operator_squared,
    five_point_derivative,
    richardson_derivatives,
)
from p3fox.utilities.errors import UsageError
from p3fox.utilities.global_instance import RuleCache, Thresholds


@pytest.mark.parametrize(
    "text, expected",
    [
        ("1.5", 1.5),
        ("2+3i", 2 + 3j),
        ("2-3i", 2 - 3j),
        ("-4i", -4j),
        ("i", 1j),
        ("0.5+2j", 0.5 + 2j),
        ("-223/225", -223 / 225),
        ("1e-3+2e-1i", 0.001 + 0.2j),
        ("-1e-3-2E+1i", -0.001 - 20j),
    ],
)
def test_parse_complex(text, expected):
    assert parse_complex(text) == pytest.approx(expected)


@pytest.mark.parametrize("text", ["", "abc", "1+", "inf", "1/0", "2+xi"])
def test_parse_complex_rejects(text):
    with pytest.raises(UsageError):
        parse_complex(text)


def test_parse_real():
    assert parse_real(" 3/4") == 0.75
    assert parse_real("-2.5e1") == -25
    with pytest.raises(UsageError):
        parse_real("nan")


def test_integer_helpers():
    assert nearest_integer(2.6 + 1j) == 3
    assert is_near_integer(4 + 1e-12, 1e-9)
    assert not is_near_integer(4.1, 1e-9)


def test_relative_difference():
    assert relative_difference(0, 0) == 0
    assert relative_difference(1, 1.1) == pytest.approx(0.1 / 1.1)


def test_richardson_derivatives():
    d1, d2 = richardson_derivatives(math.sin, 0.7, 1e-2)
    assert d1 == pytest.approx(math.cos(0.7), rel=1e-7)
    assert d2 == pytest.approx(-math.sin(0.7), rel=1e-6)


def test_euler_operator_squared():
    # (x d/dx)**2 x**3 = 9 x**3
    assert euler_operator_squared(lambda x: x**3, 1.3, 1e-2) == pytest.approx(9 * 1.3**3, rel=1e-8)


def test_five_point_derivative():
    assert five_point_derivative(math.exp, 0.2, 1e-3) == pytest.approx(math.exp(0.2), rel=1e-10)


def test_thresholds_are_read_only():
    assert Thresholds.get("pole") == 1e-13
    assert set(Thresholds.names()) == {"pole", "boundary", "integer_order", "drop"}
    assert not hasattr(Thresholds, "set")
    with pytest.raises(TypeError):
        Thresholds._values["pole"] = 1e-10  # type: ignore[index]
    with pytest.raises(KeyError):
        Thresholds.get("missing")


def test_rule_cache_resize():
    original = RuleCache.get_cache()
    try:
        RuleCache.set_cache(4)
        assert RuleCache.get_cache().maxsize == 4
        assert RuleCache.get_cache() is not original
    finally:
        RuleCache._cache = original
