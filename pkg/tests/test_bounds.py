from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from mahler_bound import bounds
from mahler_bound.interval import mpf_to_fraction
from mahler_bound.poly import parse_polynomial
from mahler_bound.primes import build_prime_table

TABLE = build_prime_table(40)
degrees = st.integers(3, 10**12)


def _r3(d):
    L = mp.log(d)
    return (mp.log(L) / L) ** 3


def _holds(enc, value) -> bool:
    return enc.lo <= value <= enc.hi


@settings(max_examples=100, deadline=None)
@given(degrees)
def test_closed_forms_match_float_oracle(d):
    with mp.workprec(200):
        assert _holds(bounds.theorem_bound(d), _r3(d) / 4)
        assert _holds(bounds.corollary1_bound(d), 1 + _r3(d) / (2 * d))
        c = mp.log(3 * d) ** 3
        h, m = bounds.corollary2_bounds(d)
        assert _holds(h, 2 / c) and _holds(m, 1 + 4 / (d * c))
        assert _holds(bounds.matveev_bound(d), mp.exp(3 * mp.log(mp.mpf(d) / 2) / d**2))
        assert _holds(bounds.dobrowolski_bound(d), 1 + _r3(d) / 1200)


def test_reference_values():
    assert abs(float(bounds.theorem_bound(22).mid) - 0.0121658) < 1e-7
    assert abs(float(bounds.corollary1_bound(22).mid) - 1.00110598) < 1e-8
    h, m = bounds.corollary2_bounds(2)
    assert abs(float(h.mid) - 0.347689) < 1e-6
    assert abs(float(bounds.dobrowolski_bound(3).mid) - 1.0000005228) < 1e-10
    # tiny degree: log log 2 < 0, so the cube is negative
    assert bounds.theorem_bound(2).hi < 0


def test_domain_errors():
    with pytest.raises(ValueError):
        bounds.theorem_bound(1)
    with pytest.raises(ValueError):
        bounds.dobrowolski_bound(2)
    bounds.matveev_bound(1)


def test_expression1_denominator_and_value():
    assert bounds.expression1_denominator(7, 11, TABLE.primes) == 6012
    with pytest.raises(ValueError):
        bounds.expression1_denominator(7, 11, TABLE.primes[:3])
    # oracle: direct evaluation of the numerator with mpmath
    d, k, s = 22, 7, 11
    ps = TABLE.primes[:s]
    with mp.workprec(200):
        block = math.prod((2 * i + 1) * math.factorial(i) ** 2 for i in range(k))
        num = (
            2 * k * mp.log(math.prod(ps))
            + (k * k + s) * (mp.mpf("3.108") - mp.mpf("8.6") * mp.mpf(d) ** (mp.mpf(-2) / 3))
            + mp.log(block)
            - (k * k + s) * mp.log(d * (k + s))
        )
        assert _holds(bounds.expression1(bounds.BoundParams(d, k, s), TABLE), num / 6012)
    assert abs(float(bounds.expression1(bounds.BoundParams(22, 7, 11), TABLE).mid) - 0.0286243) < 1e-7


def test_small_sweep_and_failure_detection():
    good = bounds.verify_range(22, 60, 7, 11, "0.56", TABLE)
    assert good.passed and good.min_margin.lo > 0
    bad = bounds.verify_range(22, 30, 7, 11, "5", TABLE)
    assert bad.failures == list(range(22, 31))
    with pytest.raises(ValueError):
        bounds.verify_range(30, 22, 7, 11, "0.56")
    with pytest.raises(ValueError):
        bounds.verify_range(22, 30, 7, 11, "0")


def test_sweep_is_identical_across_worker_counts():
    one = bounds.verify_range(22, 120, 8, 14, "0.56", TABLE, jobs=1)
    two = bounds.verify_range(22, 120, 8, 14, "0.56", TABLE, jobs=2)
    assert one.to_json() == two.to_json()


def test_simplified_form_lies_below():
    rep = bounds.verify_simplified_form(22, 94, TABLE)
    assert rep.passed and rep.min_margin.lo > 0


def test_theorem_bound_decreasing_after_e_to_the_e():
    # log log d / log d peaks at d = e^e ~ 15.2
    assert bounds.check_monotone_decreasing(bounds.theorem_bound, 16, 3000) == []
    assert bounds.check_monotone_decreasing(bounds.theorem_bound, 3, 15) != []


def test_matveev_crossover_against_float_oracle():
    last = None
    with mp.workprec(80):
        for d in range(2, 5000):
            mv = mp.exp(3 * mp.log(mp.mpf(d) / 2) / d**2)
            c1 = 1 + _r3(d) / (2 * d)
            if mv > c1:
                last = d
    got = bounds.matveev_crossover(5000)
    assert got["last_matveev_better"] == last == 2282
    assert got["undecided"] == []


@pytest.mark.parametrize(
    "d, expected",
    [(22, (7, 17)), (50, (7, 17)), (5000, (7, 17)), (10000, (7, 17)), (10001, (6, 24)), (10**6, (7, 36))],
)
def test_recommended_params(d, expected):
    p = bounds.recommended_params(d)
    assert (p.k, p.s) == expected
    assert (bounds.recommended_params(50, "0.56").k, bounds.recommended_params(50, "0.56").s) == (7, 11)


@pytest.mark.parametrize("d", [10**5, 10**12, 10**100])
def test_large_degree_params_land_in_region(d):
    p = bounds.recommended_params(d)
    k1, s1 = mpf_to_fraction(p.k1.mid), mpf_to_fraction(p.s1.mid)
    assert Fraction("1.26") <= k1 <= Fraction("1.51")
    assert k1 - Fraction("0.06") <= s1 <= k1


def test_recommended_params_rejects_small_degree():
    with pytest.raises(ValueError):
        bounds.recommended_params(10)


def test_theorem_check_verdicts():
    lehmer = bounds.theorem_check(parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"))
    assert lehmer.verdict == "PASS"
    assert lehmer.log_measure.lo > lehmer.bound.hi
    assert bounds.theorem_check(parse_polynomial("x^2-x-1")).verdict == "PASS"
    with pytest.raises(bounds.HypothesisError):
        bounds.theorem_check(parse_polynomial("x^2+x+1"))
    with pytest.raises(bounds.HypothesisError):
        bounds.theorem_check(parse_polynomial("x-2"))
