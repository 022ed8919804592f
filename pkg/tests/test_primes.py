from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp

from mahler_bound.interval import mpf_to_fraction
from mahler_bound.primes import (
    TableTooSmallError,
    build_prime_table,
    check_pi_upper,
    check_prime_sum_upper,
    check_theta_lower,
    nth_prime_upper_bound,
    sieve,
)

TABLE = build_prime_table(3000)


def test_sieve_matches_sympy():
    assert sieve(1000) == list(sympy.primerange(2, 1001))


@given(st.integers(1, 3000))
def test_table_indexing_is_one_based(i):
    assert TABLE.prime(i) == sympy.prime(i)


def test_prefix_sums():
    running = 0
    for i, p in enumerate(sympy.primerange(2, TABLE.prime(3000) + 1), start=1):
        running += p
        assert TABLE.sum_first(i) == running


def test_sum_of_first_nineteen_primes():
    assert TABLE.sum_first(19) == 568


@pytest.mark.parametrize("S", [1, 2, 13, 100, 2999])
def test_theta_enclosure(S):
    with mp.workprec(200):
        exact = mp.log(math.prod(TABLE.primes[:S]))
        assert TABLE.theta(S).lo <= exact <= TABLE.theta(S).hi


@pytest.mark.parametrize("n", [1, 5, 6, 10, 1000, 10**5])
def test_nth_prime_upper_bound(n):
    assert nth_prime_upper_bound(n) >= sympy.prime(n)


def test_table_too_small():
    with pytest.raises(TableTooSmallError):
        TABLE.require(3001)
    with pytest.raises(TableTooSmallError):
        check_theta_lower(TABLE, 5000)


def test_theta_near_tie_at_thirteen():
    rep = check_theta_lower(TABLE, 13, 13)
    assert rep.passed
    # oracle: log(2*3*...*41) - 13 log 13
    with mp.workprec(200):
        slack = mp.log(math.prod(sympy.primerange(2, 42))) - 13 * mp.log(13)
        assert rep.min_slack.lo <= slack <= rep.min_slack.hi
    assert Fraction(4, 1000) < mpf_to_fraction(rep.min_slack.lo) < Fraction(5, 1000)


def test_theta_below_threshold_is_skipped_not_failed():
    rep = check_theta_lower(TABLE, 20)
    assert rep.passed and rep.skipped == tuple(range(1, 13))
    # the inequality really does fail at S = 12, which is why the range starts at 13
    with mp.workprec(100):
        assert mp.log(math.prod(TABLE.primes[:12])) < 12 * mp.log(12)


def test_small_sweeps_pass():
    assert check_theta_lower(TABLE, 3000).passed
    assert check_pi_upper(TABLE, 3000).passed
    rep = check_prime_sum_upper(TABLE, 3000)
    assert rep.passed and rep.checked == 3000 - 8


def test_prime_sum_slack_oracle():
    rep = check_prime_sum_upper(TABLE, 9, 9)
    with mp.workprec(100):
        expected = mp.mpf("0.564") * 81 * mp.log(9) - 100
        assert abs(rep.min_slack.lo - expected) < mp.mpf(10) ** -15


def test_pi_upper_value_at_twenty():
    rep = check_pi_upper(TABLE, 20, 20)
    with mp.workprec(100):
        rhs = 20 * (mp.log(20) + mp.log(mp.log(20)) - mp.mpf(1) / 2)
        assert abs(rep.min_slack.lo - (rhs - 71)) < mp.mpf(10) ** -15
    assert rep.passed
