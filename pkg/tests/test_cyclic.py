import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helixtone.cyclic import Phase, frac, periodise, representative, round_period
from helixtone.errors import ConfigError

reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@pytest.mark.parametrize("t, rep", [(2.3, 0.3), (-0.25, 0.75), (5.0, 0.0)])
def test_periodise_examples(t, rep):
    assert periodise(t).rep == pytest.approx(rep, abs=1e-12)


@pytest.mark.parametrize("t, rep", [(0.3, 0.3), (0.0, 0.0), (1.999, 0.999)])
def test_representative_examples(t, rep):
    assert representative(periodise(t)) == pytest.approx(rep, abs=1e-12)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_periodise_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        periodise(bad)


def test_phase_validates_representative():
    with pytest.raises(ValueError):
        Phase(1.0)
    with pytest.raises(ValueError):
        Phase(-0.1)


def test_phase_arithmetic_wraps():
    assert (periodise(0.75) + 0.5).rep == pytest.approx(0.25)
    assert (periodise(0.25) - periodise(0.5)).rep == pytest.approx(0.75)
    assert float(periodise(0.4)) == pytest.approx(0.4)


def test_tiny_negative_never_gives_one():
    assert periodise(-1e-20).rep == 0.0
    assert frac(-1e-20) == 0.0


@pytest.mark.parametrize("T, R", [(11 / 3, 4), (4.0, 4), (3.5, 4), (2.0, 2), (2.49, 2), (7.25, 7)])
def test_round_period_examples(T, R):
    assert round_period(T) == R


@pytest.mark.parametrize("T", [1.99, 0.5, -3.0, math.nan, math.inf])
def test_round_period_rejects(T):
    with pytest.raises(ConfigError):
        round_period(T)


@given(reals, st.integers(min_value=-1000, max_value=1000))
def test_periodise_integer_shift(t, k):
    assert periodise(t + k).rep == pytest.approx(periodise(t).rep, abs=1e-9) or \
        abs(abs(periodise(t + k).rep - periodise(t).rep) - 1) < 1e-9


@given(st.floats(min_value=-100, max_value=100, allow_nan=False), st.integers(-50, 50))
def test_periodise_integer_shift_small(t, k):
    # small magnitudes: the shift is exact up to one rounding of t + k
    d = abs(periodise(t + k).rep - periodise(t).rep)
    assert min(d, 1 - d) <= 1e-12


@given(reals)
def test_representative_range_and_round_trip(t):
    phi = periodise(t)
    assert 0.0 <= representative(phi) < 1.0
    assert periodise(representative(phi)) == phi


@given(st.floats(min_value=2, max_value=1e6), st.floats(min_value=2, max_value=1e6))
def test_round_period_monotone_and_close(a, b):
    lo, hi = min(a, b), max(a, b)
    assert round_period(lo) <= round_period(hi)
    assert abs(round_period(a) - a) <= 0.5
