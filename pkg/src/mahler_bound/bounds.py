"""Closed-form lower bounds for the measure and certified sweeps over d."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

from mpmath import iv, mpf

from .interval import ApproxInterval, decimal_floor, enclose, lower, precision, upper
from .measure import MeasureError, mahler_measure
from .poly import IntPolynomial, is_root_of_unity_product
from .primes import PrimeTable, build_prime_table
from .vandermonde import LOG_DISC_CONST, LOG_DISC_CORR, factorial_block

DEFAULT_BITS = 96
MAX_BITS = 1024

# k, s choices for d <= 10000, keyed by goal constant: (d_lo, d_hi, k, s)
PARAM_TABLE = {
    Fraction("0.56"): ((22, 94, 7, 11), (43, 190, 8, 14)),
    Fraction("0.25"): ((22, 10000, 7, 17),),
}
REGION_K1 = (Fraction("1.26"), Fraction("1.51"))
REGION_GAP = Fraction("0.06")
REGION_TARGET = Fraction("1.385")

SIMPLIFIED_NUM = (Fraction("422.1"), 516, 60)
SIMPLIFIED_DEN = 6012

Real = Union[int, Fraction, str]


class HypothesisError(ValueError):
    """The input violates a hypothesis of the bound being evaluated."""


def _check_d(d: int, least: int = 2) -> None:
    if d < least:
        raise HypothesisError(f"d must be >= {least}")


def log_log_ratio(d: Real):
    """(log log d / log d) as an iv interval at the current precision."""
    L = iv.log(enclose(d))
    return iv.log(L) / L


def theorem_bound(d: int, bits: int = DEFAULT_BITS) -> ApproxInterval:
    """(1/4) (log log d / log d)^3."""
    _check_d(d)
    with precision(bits):
        return ApproxInterval.from_iv(log_log_ratio(d) ** 3 / 4)


def corollary1_bound(d: int, bits: int = DEFAULT_BITS) -> ApproxInterval:
    """1 + (1/(2d)) (log log d / log d)^3."""
    _check_d(d)
    with precision(bits):
        return ApproxInterval.from_iv(1 + log_log_ratio(d) ** 3 / (2 * d))


def corollary2_bounds(d: int, bits: int = DEFAULT_BITS) -> Tuple[ApproxInterval, ApproxInterval]:
    """(2 / log(3d)^3, 1 + 4 / (d log(3d)^3)): height and house bounds."""
    _check_d(d)
    with precision(bits):
        c = iv.log(iv.mpf(3 * d)) ** 3
        return ApproxInterval.from_iv(2 / c), ApproxInterval.from_iv(1 + 4 / (d * c))


def matveev_bound(d: int, bits: int = DEFAULT_BITS) -> ApproxInterval:
    """exp(3 log(d/2) / d^2)."""
    _check_d(d, 1)
    with precision(bits):
        return ApproxInterval.from_iv(iv.exp(3 * iv.log(enclose(Fraction(d, 2))) / (d * d)))


def dobrowolski_bound(d: int, bits: int = DEFAULT_BITS) -> ApproxInterval:
    """1 + (1/1200) (log log d / log d)^3."""
    _check_d(d, 3)
    with precision(bits):
        return ApproxInterval.from_iv(1 + log_log_ratio(d) ** 3 / 1200)


# ---------------------------------------------------------------------------
# expression (1)


@dataclass(frozen=True)
class BoundParams:
    d: int
    k: int
    s: int

    def __post_init__(self) -> None:
        if self.d < 2 or self.k < 1 or self.s < 1:
            raise ValueError("need d >= 2, k >= 1, s >= 1")

    @property
    def n(self) -> int:
        return self.d * (self.k + self.s)


def expression1_denominator(k: int, s: int, primes: Sequence[int]) -> int:
    """2(k+s)(k + p_1 + ... + p_s), exactly."""
    if len(primes) < s:
        raise ValueError("not enough primes")
    return 2 * (k + s) * (k + sum(primes[:s]))


def _expression1_iv(d: int, k: int, s: int, primes: Sequence[int]):
    q = k * k + s
    theta = iv.log(iv.mpf(math.prod(primes[:s])))
    disc = enclose(LOG_DISC_CONST) - enclose(LOG_DISC_CORR) * iv.exp(-iv.log(iv.mpf(d)) * 2 / 3)
    num = (
        2 * k * theta
        + q * disc
        + iv.log(iv.mpf(factorial_block(k)))
        - q * iv.log(iv.mpf(d * (k + s)))
    )
    return num / expression1_denominator(k, s, primes)


def expression1(params: BoundParams, table: PrimeTable, bits: int = DEFAULT_BITS) -> ApproxInterval:
    """Enclosure of the lower bound for log M obtained from (d, k, s)."""
    table.require(params.s)
    with precision(bits):
        return ApproxInterval.from_iv(_expression1_iv(params.d, params.k, params.s, table.primes))


def simplified_expression1(d: int, bits: int = DEFAULT_BITS) -> ApproxInterval:
    """(422.1 - 516 d^(-2/3) - 60 log d) / 6012, the closed form used for k=7, s=11."""
    a, b, c = SIMPLIFIED_NUM
    with precision(bits):
        ld = iv.log(iv.mpf(d))
        val = (enclose(a) - b * iv.exp(-ld * 2 / 3) - c * ld) / SIMPLIFIED_DEN
        return ApproxInterval.from_iv(val)


# ---------------------------------------------------------------------------
# certified sweeps


@dataclass
class SweepReport:
    d_lo: int
    d_hi: int
    k: int
    s: int
    c: Fraction
    failures: List[int] = field(default_factory=list)
    min_margin: Optional[ApproxInterval] = None
    min_margin_at: Optional[int] = None
    precision_bits: int = DEFAULT_BITS

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        m = self.min_margin
        return {
            "d_lo": str(self.d_lo),
            "d_hi": str(self.d_hi),
            "k": str(self.k),
            "s": str(self.s),
            "c": str(self.c),
            "failures": [str(d) for d in self.failures],
            "min_margin_lo": None if m is None else m.to_json()["lo"],
            "min_margin_hi": None if m is None else m.to_json()["hi"],
            "min_margin_at": None if self.min_margin_at is None else str(self.min_margin_at),
            "precision_bits": str(self.precision_bits),
            "passed": self.passed,
        }


def _margin_one(d: int, k: int, s: int, c: Fraction, primes: Sequence[int], bits: int, max_bits: int):
    """(d, margin lo, margin hi, ok, bits used); ok means expr.lo > (c ratio^3).hi."""
    while True:
        with precision(bits):
            e = _expression1_iv(d, k, s, primes)
            rhs = enclose(c) * log_log_ratio(d) ** 3
            ok = lower(e) > upper(rhs)
            decided = ok or upper(e) <= lower(rhs)
            margin = e - rhs
            lo, hi = lower(margin), upper(margin)
        if decided or bits >= max_bits:
            return d, lo, hi, ok, bits
        bits *= 2


def _sweep_chunk(args):
    ds, k, s, c, primes, bits, max_bits = args
    return [_margin_one(d, k, s, c, primes, bits, max_bits) for d in ds]


def _chunks(items: List[int], parts: int) -> List[List[int]]:
    size = max(1, -(-len(items) // parts))
    return [items[i : i + size] for i in range(0, len(items), size)]


def verify_range(
    d_lo: int,
    d_hi: int,
    k: int,
    s: int,
    c: Real,
    table: Optional[PrimeTable] = None,
    jobs: int = 1,
    bits: int = DEFAULT_BITS,
    max_bits: int = MAX_BITS,
) -> SweepReport:
    """Certify expression1(d, k, s) > c (log log d / log d)^3 for every d in [d_lo, d_hi]."""
    if d_lo < 2 or d_hi < d_lo:
        raise ValueError("invalid d range")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    if table is None:
        table = build_prime_table(max(s, 1))
    table.require(s)
    primes = tuple(table.primes[:s])
    ds = list(range(d_lo, d_hi + 1))
    if jobs > 1 and len(ds) > 1:
        tasks = [(chunk, k, s, c, primes, bits, max_bits) for chunk in _chunks(ds, jobs * 4)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = [r for part in pool.map(_sweep_chunk, tasks) for r in part]
    else:
        rows = _sweep_chunk((ds, k, s, c, primes, bits, max_bits))
    rows.sort(key=lambda r: r[0])
    rep = SweepReport(d_lo, d_hi, k, s, c, precision_bits=bits)
    for d, lo, hi, ok, used in rows:
        rep.precision_bits = max(rep.precision_bits, used)
        if not ok:
            rep.failures.append(d)
        if rep.min_margin is None or lo < rep.min_margin.lo:
            rep.min_margin = ApproxInterval(lo, hi)
            rep.min_margin_at = d
    return rep


def verify_simplified_form(d_lo: int = 22, d_hi: int = 94, table: Optional[PrimeTable] = None) -> SweepReport:
    """Certify that the closed form for (k, s) = (7, 11) lies below expression1."""
    table = table or build_prime_table(11)
    rep = SweepReport(d_lo, d_hi, 7, 11, Fraction(0))
    for d in range(d_lo, d_hi + 1):
        margin = expression1(BoundParams(d, 7, 11), table) - simplified_expression1(d)
        if not margin.lo > 0:
            rep.failures.append(d)
        if rep.min_margin is None or margin.lo < rep.min_margin.lo:
            rep.min_margin, rep.min_margin_at = margin, d
    return rep


def check_monotone_decreasing(
    fn: Callable[[int], ApproxInterval], d_lo: int, d_hi: int
) -> List[int]:
    """d values where fn(d+1) < fn(d) could not be certified."""
    bad = []
    prev = fn(d_lo)
    for d in range(d_lo + 1, d_hi + 1):
        cur = fn(d)
        if not cur.hi < prev.lo:
            bad.append(d)
        prev = cur
    return bad


def matveev_crossover(d_max: int = 10000) -> dict:
    """Where Matveev's bound stops exceeding 1 + r^3/(2d) (certified comparisons)."""
    last_better = None
    undecided = []
    for d in range(2, d_max + 1):
        mv, c1 = matveev_bound(d), corollary1_bound(d)
        if mv.lo > c1.hi:
            last_better = d
        elif not mv.hi < c1.lo:
            undecided.append(d)
    first_worse = None if last_better is None else last_better + 1
    return {"last_matveev_better": last_better, "first_corollary_better": first_worse, "undecided": undecided}


# ---------------------------------------------------------------------------
# parameter choice


@dataclass(frozen=True)
class ParamChoice:
    k: int
    s: int
    k1: Optional[ApproxInterval] = None
    s1: Optional[ApproxInterval] = None
    source: str = "table"

    def to_json(self) -> dict:
        out = {"k": str(self.k), "s": str(self.s), "source": self.source}
        if self.k1 is not None:
            out["k1"] = str(self.k1)
            out["s1"] = str(self.s1)
        return out


def _in_region(k1, s1) -> bool:
    klo, khi = REGION_K1
    return (
        lower(k1) >= upper(enclose(klo))
        and upper(k1) <= lower(enclose(khi))
        and lower(s1) >= upper(k1 - enclose(REGION_GAP))
        and upper(s1) <= lower(k1)
    )


def recommended_params(d: int, goal: Real = "0.25", bits: int = DEFAULT_BITS) -> ParamChoice:
    """(k, s) for degree d.

    Up to 10000 this is the fixed table for the goal constant.  Beyond it,
    k = k1 L and s = s1 L^2 with L = log d / log log d, aiming for
    k1 = s1 = 1.385 and moving to the nearest integer pair whose back-solved
    (k1, s1) is certified to lie in 1.26 <= k1 <= 1.51, k1 - 0.06 <= s1 <= k1.
    """
    if d < 22:
        raise ValueError("d must be >= 22")
    goal = Fraction(goal)
    if d <= 10000:
        rows = PARAM_TABLE.get(goal)
        if rows is None:
            raise ValueError(f"no table entry for goal {goal}")
        for lo, hi, k, s in rows:
            if lo <= d <= hi:
                return ParamChoice(k, s, source=f"table {lo}..{hi} for c={goal}")
        raise ValueError(f"no table entry covers d={d} for goal {goal}")
    with precision(bits):
        ll = iv.log(iv.log(iv.mpf(d)))
        L = iv.log(iv.mpf(d)) / ll
        Lm = float(L.mid)
        target = float(REGION_TARGET)
        best = None
        klo = math.floor(float(REGION_K1[0]) * Lm) - 1
        khi = math.ceil(float(REGION_K1[1]) * Lm) + 1
        for k in range(max(1, klo), khi + 1):
            k1 = iv.mpf(k) / L
            if not lower(k1) >= upper(enclose(REGION_K1[0])) or not upper(k1) <= lower(enclose(REGION_K1[1])):
                continue
            kf = float(k1.mid)
            slo = math.floor((kf - 0.06) * Lm * Lm) - 1
            shi = math.ceil(kf * Lm * Lm) + 1
            for s in range(max(1, slo), shi + 1):
                s1 = iv.mpf(s) / (L * L)
                if not _in_region(k1, s1):
                    continue
                score = (kf - target) ** 2 + (float(s1.mid) - target) ** 2
                if best is None or score < best[0]:
                    best = (score, k, s, k1, s1)
        if best is None:
            raise ArithmeticError(f"no integer (k, s) inside the region for d={d}")
        _, k, s, k1, s1 = best
        return ParamChoice(
            k, s, ApproxInterval.from_iv(k1), ApproxInterval.from_iv(s1), source="region midpoint (artifact choice)"
        )


# ---------------------------------------------------------------------------
# checking a polynomial against the main bound


@dataclass(frozen=True)
class TheoremVerdict:
    verdict: str
    degree: int
    log_measure: Optional[ApproxInterval]
    bound: ApproxInterval
    precision_bits: int
    note: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "degree": str(self.degree),
            "log_measure": None if self.log_measure is None else self.log_measure.to_json(),
            "bound": self.bound.to_json(),
            "precision_bits": str(self.precision_bits),
            "note": self.note,
        }


def theorem_check(f: IntPolynomial, precision_bits: int = 256) -> TheoremVerdict:
    """Compare log M(f) with (1/4)(log log d / log d)^3.

    PASS when certified above, FAIL when certified below, INCONCLUSIVE when
    the enclosures overlap.  Only meaningful for irreducible f.
    """
    d = f.degree
    if d < 2:
        raise HypothesisError("degree must be >= 2")
    if abs(f.leading) == 1 and f.constant != 0 and is_root_of_unity_product(f if f.leading == 1 else -f):
        raise HypothesisError("every root is a root of unity; the bound assumes otherwise")
    bound = theorem_bound(d)
    try:
        res = mahler_measure(f, precision_bits)
    except MeasureError as exc:
        if exc.enclosure is None:
            return TheoremVerdict("INCONCLUSIVE", d, None, bound, precision_bits, str(exc))
        with precision(precision_bits):
            lm = ApproxInterval.from_iv(iv.log(exc.enclosure.to_iv()))
        verdict = "PASS" if lm.lo > bound.hi else "INCONCLUSIVE"
        return TheoremVerdict(verdict, d, lm, bound, precision_bits, str(exc))
    lm = res.log_measure
    if lm.lo > bound.hi:
        verdict = "PASS"
    elif lm.hi < bound.lo:
        verdict = "FAIL"
    else:
        verdict = "INCONCLUSIVE"
    return TheoremVerdict(verdict, d, lm, bound, res.precision_bits)
