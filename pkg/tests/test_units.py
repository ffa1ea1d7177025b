import pytest

from dipolegauge import NATURAL, UnitSystem


def test_natural_defaults():
    assert NATURAL.hbar == 1.0
    assert NATURAL.epsilon0 == 1.0
    assert NATURAL.c == 1.0
    assert UnitSystem() == NATURAL


def test_custom_values_kept():
    u = UnitSystem(hbar=2.0, epsilon0=3.0, c=4.0)
    assert (u.hbar, u.epsilon0, u.c) == (2.0, 3.0, 4.0)


@pytest.mark.parametrize("kwargs", [
    {"hbar": 0.0},
    {"epsilon0": -1.0},
    {"c": float("nan")},
    {"hbar": float("inf")},
    {"c": True},
])
def test_invalid_constants_rejected(kwargs):
    with pytest.raises(ValueError):
        UnitSystem(**kwargs)
