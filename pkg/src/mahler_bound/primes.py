"""Prime tables with exact prefix sums and enclosed theta sums, plus
finite-range certificates for three classical prime inequalities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from mpmath import iv

from .interval import ApproxInterval, decimal_floor, enclose, lower, precision, upper

DEFAULT_PRECISION = 80
MAX_PRECISION = 4096

THETA_FROM = 13
PRIME_SUM_FROM = 9
PRIME_SUM_CONSTANT = Fraction("0.564")
PI_UPPER_FROM = 20


class TableTooSmallError(ValueError):
    """The requested range needs more primes than the table holds."""


@dataclass(frozen=True)
class PrimeTable:
    """The first ``len(primes)`` primes.

    Lists are 0-based (``primes[0] == 2``); the accessors ``prime``,
    ``sum_first`` and ``theta`` take the 1-based count S used in the
    inequalities, so ``sum_first(19) == 568``.
    """

    primes: Tuple[int, ...]
    prefix_sum: Tuple[int, ...]
    theta_prefix: Tuple[ApproxInterval, ...]
    precision_bits: int = DEFAULT_PRECISION

    def __len__(self) -> int:
        return len(self.primes)

    def prime(self, i: int) -> int:
        return self.primes[i - 1]

    def sum_first(self, S: int) -> int:
        return self.prefix_sum[S - 1] if S else 0

    def theta(self, S: int) -> ApproxInterval:
        """Enclosure of log(p_1 ... p_S)."""
        return self.theta_prefix[S - 1] if S else ApproxInterval.exact(0)

    def require(self, count: int) -> None:
        if count > len(self.primes):
            raise TableTooSmallError(f"table has {len(self.primes)} primes, need {count}")


def nth_prime_upper_bound(n: int) -> int:
    """An integer >= p_n (Rosser's bound p_n < n(log n + log log n) for n >= 6)."""
    if n < 6:
        return 13
    return int(n * (math.log(n) + math.log(math.log(n)))) + 1


def sieve(limit: int) -> List[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, v in enumerate(flags) if v]


def build_prime_table(count: int, precision_bits: int = DEFAULT_PRECISION) -> PrimeTable:
    if count < 1:
        raise ValueError("count must be >= 1")
    primes = sieve(nth_prime_upper_bound(count))[:count]
    prefix: List[int] = []
    acc = 0
    for p in primes:
        acc += p
        prefix.append(acc)
    thetas: List[ApproxInterval] = []
    with precision(precision_bits):
        t = iv.mpf(0)
        for p in primes:
            t = t + iv.log(iv.mpf(p))
            thetas.append(ApproxInterval.from_iv(t))
    return PrimeTable(tuple(primes), tuple(prefix), tuple(thetas), precision_bits)


@dataclass
class LemmaReport:
    lemma: str
    range: Tuple[int, int]
    failures: List[int] = field(default_factory=list)
    min_slack: Optional[ApproxInterval] = None
    min_slack_at: Optional[int] = None
    precision_bits: int = DEFAULT_PRECISION
    skipped: Tuple[int, ...] = ()
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked > 0

    def note_slack(self, index: int, slack: ApproxInterval) -> None:
        if self.min_slack is None or slack.lo < self.min_slack.lo:
            self.min_slack = slack
            self.min_slack_at = index

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "range": [str(self.range[0]), str(self.range[1])],
            "failures": [str(i) for i in self.failures],
            "min_slack": None if self.min_slack is None else decimal_floor(self.min_slack.lo),
            "min_slack_at": None if self.min_slack_at is None else str(self.min_slack_at),
            "precision_bits": str(self.precision_bits),
            "skipped": [str(i) for i in self.skipped],
            "checked": str(self.checked),
            "passed": self.passed,
        }


def _split_range(lo: int, hi: int, start: int) -> Tuple[Tuple[int, ...], int]:
    skipped = tuple(range(lo, min(hi, start - 1) + 1))
    return skipped, max(lo, start)


def _theta_exact(table: PrimeTable, S: int, bits: int):
    """log of the exact primorial, one rounding only."""
    prod = math.prod(table.primes[:S])
    with precision(bits):
        return iv.log(iv.mpf(prod))


def check_theta_lower(
    table: PrimeTable, S_max: int, S_min: int = 1, max_precision: int = MAX_PRECISION
) -> LemmaReport:
    """Certify theta(p_S) >= S log S for THETA_FROM <= S <= S_max."""
    table.require(S_max)
    skipped, start = _split_range(S_min, S_max, THETA_FROM)
    rep = LemmaReport("theta_lower", (S_min, S_max), precision_bits=table.precision_bits, skipped=skipped)
    with precision(table.precision_bits):
        for S in range(start, S_max + 1):
            rhs = iv.mpf(S) * iv.log(iv.mpf(S))
            th = table.theta(S)
            bits = table.precision_bits
            while not th.lo >= upper(rhs) and bits < max_precision:
                # undecided at this precision: recompute both sides more finely
                bits *= 2
                th = ApproxInterval.from_iv(_theta_exact(table, S, bits))
                with precision(bits):
                    rhs = iv.mpf(S) * iv.log(iv.mpf(S))
                rep.precision_bits = max(rep.precision_bits, bits)
            rep.checked += 1
            with precision(bits):
                rep.note_slack(S, ApproxInterval.from_iv(th.to_iv() - rhs))
            if not th.lo >= upper(rhs):
                rep.failures.append(S)
    return rep


def check_prime_sum_upper(
    table: PrimeTable, S_max: int, S_min: int = 1, max_precision: int = MAX_PRECISION
) -> LemmaReport:
    """Certify p_1 + ... + p_S <= 0.564 S^2 log S for PRIME_SUM_FROM <= S <= S_max."""
    table.require(S_max)
    skipped, start = _split_range(S_min, S_max, PRIME_SUM_FROM)
    rep = LemmaReport("prime_sum_upper", (S_min, S_max), precision_bits=table.precision_bits, skipped=skipped)
    for S in range(start, S_max + 1):
        lhs = table.sum_first(S)
        bits = table.precision_bits
        while True:
            with precision(bits):
                rhs = enclose(PRIME_SUM_CONSTANT) * iv.mpf(S * S) * iv.log(iv.mpf(S))
                decided = lhs <= lower(rhs) or lhs > upper(rhs)
                slack = ApproxInterval.from_iv(rhs - lhs)
            if decided or bits >= max_precision:
                break
            bits *= 2
        rep.precision_bits = max(rep.precision_bits, bits)
        rep.checked += 1
        rep.note_slack(S, slack)
        if not lhs <= lower(rhs):
            rep.failures.append(S)
    return rep


def check_pi_upper(
    table: PrimeTable, i_max: int, i_min: int = 1, max_precision: int = MAX_PRECISION
) -> LemmaReport:
    """Certify p_i < i (log i + log log i - 1/2) for PI_UPPER_FROM <= i <= i_max."""
    table.require(i_max)
    skipped, start = _split_range(i_min, i_max, PI_UPPER_FROM)
    rep = LemmaReport("pi_upper", (i_min, i_max), precision_bits=table.precision_bits, skipped=skipped)
    half = Fraction(1, 2)
    for i in range(start, i_max + 1):
        p = table.prime(i)
        bits = table.precision_bits
        while True:
            with precision(bits):
                L = iv.log(iv.mpf(i))
                rhs = iv.mpf(i) * (L + iv.log(L) - enclose(half))
                decided = p < lower(rhs) or p >= upper(rhs)
                slack = ApproxInterval.from_iv(rhs - p)
            if decided or bits >= max_precision:
                break
            bits *= 2
        rep.precision_bits = max(rep.precision_bits, bits)
        rep.checked += 1
        rep.note_slack(i, slack)
        if not p < lower(rhs):
            rep.failures.append(i)
    return rep
