from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import iv, mp, mpf

from mahler_bound.interval import (
    ApproxInterval,
    decimal_ceil,
    decimal_floor,
    enclose,
    mpf_to_fraction,
    precision,
)

fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)


def test_mpf_to_fraction_keeps_sign():
    assert mpf_to_fraction(mpf(-3) / 4) == Fraction(-3, 4)
    assert mpf_to_fraction(mpf(-6)) == -6


def test_mpf_to_fraction_keeps_all_bits_above_double_precision():
    with precision(200):
        x = iv.mpf(1) / 3
        lo = ApproxInterval.from_iv(x).lo
    q = mpf_to_fraction(lo)
    assert q < Fraction(1, 3)
    assert Fraction(1, 3) - q < Fraction(1, 2**190)


def test_mpf_to_fraction_rejects_infinity():
    with pytest.raises(ValueError):
        mpf_to_fraction(mp.inf)


def test_enclose_reads_decimal_strings_exactly():
    with precision(120):
        x = ApproxInterval.exact("0.564")
    assert x.contains(Fraction(564, 1000))
    assert not x.contains(Fraction(0.564))  # the binary double is a different number


def test_negative_interval_formatting():
    x = ApproxInterval.exact(Fraction(-13, 2))
    assert x.to_json() == {"lo": "-6.5", "hi": "-6.5"}
    assert str(x).startswith("[-6.5")


def test_decimal_rounding_directions():
    with precision(80):
        third = iv.mpf(1) / 3
    lo, hi = ApproxInterval.from_iv(third).lo, ApproxInterval.from_iv(third).hi
    assert Fraction(decimal_floor(lo, 10)) <= Fraction(1, 3) <= Fraction(decimal_ceil(hi, 10))


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        ApproxInterval(mpf(2), mpf(1))


def test_precision_context_restores():
    before = iv.prec
    with precision(300):
        assert iv.prec == 300
    assert iv.prec == before
    with pytest.raises(ValueError):
        with precision(20):
            pass


@settings(max_examples=200, deadline=None)
@given(fractions, fractions)
def test_arithmetic_encloses_exact_result(a, b):
    x, y = ApproxInterval.exact(a), ApproxInterval.exact(b)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if b != 0:
        assert (x / y).contains(a / b)


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000))
def test_log_exp_round_trip_encloses(a):
    with precision(96):
        back = ApproxInterval.exact(a).log().exp()
    assert back.contains(a)


def test_certain_comparisons():
    x = ApproxInterval.exact(Fraction(1, 3))
    assert x.certainly_gt(Fraction(1, 4))
    assert x.certainly_lt("0.34")
    assert not x.certainly_gt(Fraction(1, 3))
    assert ApproxInterval.hull(x, ApproxInterval.exact(2)).contains(1)
    assert enclose(Fraction(7)) == iv.mpf(7)
