"""Tests for the numbers module."""
from npdual.utils.numbers import OPEN_UNIT, POSITIVE, NpdualRange


def test_closed_range():
    """Both ends belong to a closed range."""
    closed = NpdualRange(min=1, max=3)
    assert closed.in_range(1)
    assert closed.in_range(3)
    assert closed.in_range(2.5)
    assert not closed.in_range(3.1)
    assert closed.describe() == '[1, 3]'

def test_open_unit():
    """Significance levels exclude 0 and 1."""
    assert not OPEN_UNIT.in_range(0.0)
    assert not OPEN_UNIT.in_range(1.0)
    assert OPEN_UNIT.in_range(0.05)
    assert OPEN_UNIT.describe() == '(0.0, 1.0)'

def test_non_numbers():
    """Booleans and strings are never in range."""
    assert not POSITIVE.in_range(True)
    assert not POSITIVE.in_range('1')
    assert POSITIVE.in_range(1e-300)
