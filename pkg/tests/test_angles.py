"""Exact rational angles: reduction, bits, expansion, dyadic detection."""

import pytest

from greenjulia.angles import DirectionAngle
from greenjulia.errors import DomainError, DyadicAngleError


def test_reduction_and_validation():
    a = DirectionAngle(4, 6)
    assert (a.numerator, a.denominator) == (2, 3)
    with pytest.raises(DomainError):
        DirectionAngle(3, 3)
    with pytest.raises(DomainError):
        DirectionAngle(0, 5)
    with pytest.raises(DomainError):
        DirectionAngle(1, -2)


def test_parse():
    assert str(DirectionAngle.parse("10/15")) == "2/3"
    with pytest.raises(DomainError):
        DirectionAngle.parse("0.5")


def test_dyadic_detection():
    assert DirectionAngle(3, 8).is_dyadic
    assert DirectionAngle(3, 8).dyadic_level == 3
    assert not DirectionAngle(2, 3).is_dyadic
    with pytest.raises(DyadicAngleError):
        DirectionAngle(2, 3).dyadic_level


def test_bits_match_expansion():
    a = DirectionAngle(5, 12)  # 0.0110101010... = prefix 0110, period 10
    prefix, period = a.expansion()
    stream = list(prefix) + list(period) * 4
    for n in range(1, len(stream) + 1):
        assert a.bit(n) == stream[n - 1]


def test_expansion_examples():
    prefix, period = DirectionAngle(2, 3).expansion()
    assert prefix == () and period == (1, 0)
    prefix, period = DirectionAngle(1, 3).expansion()
    assert prefix == () and period == (0, 1)
    with pytest.raises(DyadicAngleError):
        DirectionAngle(1, 4).expansion()


def test_shift_and_complement():
    a = DirectionAngle(2, 3)
    assert str(a.shift()) == "1/3"
    assert str(a.shift_n(3)) == "1/3"
    assert str(a.complement()) == "1/3"
    assert str(DirectionAngle(5, 12).shift()) == "5/6"


def test_phase_fraction_exact():
    a = DirectionAngle(2, 3)
    # 2^n * 2/3 mod 2 alternates between 4/3 and 2/3
    assert a.phase_fraction(0) == (2, 3)
    assert a.phase_fraction(1) == (4, 3)
    assert a.phase_fraction(2) == (2, 3)
    b = DirectionAngle(1, 2)
    assert b.phase_fraction(1) == (1, 1)  # lands on the integer phase
