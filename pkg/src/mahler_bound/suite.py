"""One-shot reproduction of every published number the package checks."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from . import bounds, lemmas, primes, search, vandermonde
from .interval import ApproxInterval, mpf_to_fraction, precision
from .measure import mahler_measure
from .poly import IntPolynomial, parse_polynomial, resultant

LEHMER = "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"
LEHMER_VALUE = "1.1762808"
SMYTH = "x^3-x-1"
SMYTH_VALUE = "1.32471"

PASS, FAIL, INCONCLUSIVE, SKIPPED = "PASS", "FAIL", "INCONCLUSIVE", "SKIPPED"


@dataclass
class CheckResult:
    name: str
    group: str
    location: str
    status: str
    detail: str
    seconds: float = 0.0

    def to_json(self) -> dict:
        # wall time is left out so that repeated runs serialise identically
        return {
            "name": self.name,
            "group": self.group,
            "location": self.location,
            "status": self.status,
            "detail": self.detail,
        }


def _truncation_encloses(m: ApproxInterval, reference: str) -> bool:
    """m lies within [reference, reference + one unit in the last reference place]."""
    p = Fraction(reference)
    unit = Fraction(1, 10 ** len(reference.split(".")[1]))
    return p <= mpf_to_fraction(m.lo) and mpf_to_fraction(m.hi) <= p + unit


def exact_width(m: ApproxInterval) -> Fraction:
    return mpf_to_fraction(m.hi) - mpf_to_fraction(m.lo)


# --- individual checks; each returns (passed, detail) ------------------------


def check_measure_anchors() -> Tuple[bool, str]:
    out = []
    ok = True
    for text, reference in ((LEHMER, LEHMER_VALUE), (SMYTH, SMYTH_VALUE)):
        t = time.perf_counter()
        m = mahler_measure(parse_polynomial(text)).measure
        dt = time.perf_counter() - t
        good = _truncation_encloses(m, reference) and exact_width(m) <= Fraction(1, 10**9) and dt < 1
        ok &= good
        out.append(f"M({text}) = {m}")
    return ok, "; ".join(out)


def check_range_sweeps(jobs: int = 1, quick: bool = False) -> Tuple[bool, str]:
    table = primes.build_prime_table(20)
    runs = [(22, 94, 7, 11, "0.56"), (43, 190, 8, 14, "0.56")]
    if not quick:
        runs.append((22, 10000, 7, 17, "0.25"))
    ok = True
    parts = []
    for lo, hi, k, s, c in runs:
        rep = bounds.verify_range(lo, hi, k, s, c, table, jobs=jobs)
        ok &= rep.passed
        parts.append(f"{lo}..{hi} k={k} s={s} c={c}: failures={len(rep.failures)} min margin {rep.min_margin}")
    return ok, "; ".join(parts)


def check_expression1() -> Tuple[bool, str]:
    table = primes.build_prime_table(11)
    den = bounds.expression1_denominator(7, 11, table.primes)
    rep = bounds.verify_simplified_form(22, 94, table)
    return den == 6012 and rep.passed, f"denominator {den}; simplified form below on 22..94, min gap {rep.min_margin}"


def check_lemma1(K_max: int = 1000) -> Tuple[bool, str]:
    rep = lemmas.check_lemma1(K_max)
    return rep.passed, f"K <= {K_max}: failures={len(rep.failures)} min slack {rep.min_slack} at K={rep.min_slack_at}"


def check_lemma2(S_max: int = 10**5) -> Tuple[bool, str]:
    table = primes.build_prime_table(S_max)
    a = primes.check_theta_lower(table, S_max)
    b = primes.check_pi_upper(table, S_max)
    c = primes.check_prime_sum_upper(table, S_max)
    s13 = primes.check_theta_lower(table, 13, 13)
    ok = a.passed and b.passed and c.passed and table.sum_first(19) == 568 and s13.passed
    return ok, (
        f"theta: min slack {a.min_slack} at S={a.min_slack_at}; "
        f"p_i bound: min slack {b.min_slack} at i={b.min_slack_at}; "
        f"prime sum: min slack {c.min_slack} at S={c.min_slack_at}; sum of first 19 primes {table.sum_first(19)}"
    )


def check_lemma3_region(jobs: int = 1) -> Tuple[bool, str]:
    c3 = lemmas.check_lemma3(jobs=jobs)
    cd = lemmas.check_denominator_product()
    mf = lemmas.minimize_f_region()
    reference = {"k1=1.26": "0.2583", "k1=1.51": "0.2541", "k1=s1+0.06": "0.2624", "k1=s1": "0.2541"}
    edges_ok = all(
        abs(Fraction(mf.edges[name]["grid_min_value"]) - Fraction(v)) <= Fraction(1, 1000)
        for name, v in reference.items()
    )
    stat_ok = mf.stationary == (Fraction(125, 79), Fraction(15625, 12482))
    ok = (
        c3.passed
        and c3.min_value.lo > 0
        and cd.passed
        and cd.min_value.lo > 0
        and mf.passed
        and edges_ok
        and stat_ok
    )
    return ok, (
        f"positivity lemma min {c3.min_value} over {c3.cells} cells; "
        f"denominator product min {cd.min_value}; f region min {mf.region_min}; "
        f"stationary point {mf.stationary[0]}, {mf.stationary[1]}"
    )


def _random_confluent(rng: random.Random) -> vandermonde.ConfluentSpec:
    while True:
        m = rng.randint(1, 5)
        mult = [rng.randint(1, 3) for _ in range(m)]
        if sum(mult) > 12:
            continue
        betas = set()
        while len(betas) < m:
            betas.add(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
        return vandermonde.ConfluentSpec(tuple(betas), tuple(mult))


def _small_irreducible(rng: random.Random) -> IntPolynomial:
    """Monic degree 2 or 3 with no rational root (hence irreducible)."""
    while True:
        d = rng.choice((2, 3))
        coeffs = [rng.randint(-4, 4) for _ in range(d)] + [1]
        if coeffs[0] == 0:
            continue
        f = IntPolynomial(coeffs)
        a0 = abs(coeffs[0])
        if any(f(r) == 0 for q in range(1, a0 + 1) if a0 % q == 0 for r in (q, -q)):
            continue
        return f


def check_vandermonde(seed: int = 0) -> Tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(200):
        spec = _random_confluent(rng)
        det = vandermonde.det_direct(vandermonde.build_confluent_matrix(spec))
        if abs(det) != abs(vandermonde.closed_form_exact(spec)):
            bad += 1
    table = primes.build_prime_table(5)
    checked = 0
    dbad = 0
    for _ in range(20):
        f = _small_irreducible(rng)
        for k in (1, 2):
            for s in (0, 1, 2):
                ps = vandermonde.HeightMatrixSpec(f, k, s)
                dec = vandermonde.decompose_v_squared(ps, table)
                if dec.degenerate:
                    continue
                cs = ps.confluent_spec(table, 192)
                with precision(208):
                    dabs = vandermonde.det_abs(vandermonde.build_confluent_matrix(cs))
                    sq = dabs * dabs
                checked += 1
                if not sq.contains(abs(dec.V2)):
                    dbad += 1
    return bad == 0 and dbad == 0, (
        f"closed form vs elimination: {bad} mismatches in 200; "
        f"V^2 decomposition vs |det|^2: {dbad} mismatches in {checked}"
    )


def check_fermat(seed: int = 0) -> Tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    count = 0
    for _ in range(200):
        d = rng.randint(1, 6)
        f = IntPolynomial([rng.randint(-5, 5) for _ in range(d)] + [1])
        for p in (2, 3, 5, 7, 11, 13):
            count += 1
            if resultant(f, f.compose_power(p)) % p**d != 0:
                bad += 1
    return bad == 0, f"{count} (f, p) pairs, {bad} failures"


def check_search() -> Tuple[bool, str]:
    spec = search.SearchSpec(10, 1, reciprocal_only=True, monic_only=True, measure_cutoff=Fraction("1.3"))
    hits = search.find_small_measures(spec)
    lehmer = parse_polynomial(LEHMER)
    ok = (
        bool(hits)
        and hits[0].polynomial == lehmer
        and _truncation_encloses(hits[0].measure, LEHMER_VALUE)
        and (len(hits) == 1 or hits[1].measure.lo > hits[0].measure.hi)
    )
    return ok, f"{len(hits)} hits up to 1.3; smallest {hits[0].polynomial} with M = {hits[0].measure}"


# --- registry ------------------------------------------------------------------

Check = Tuple[str, str, str, Callable[..., Tuple[bool, str]], bool]

CHECKS: List[Check] = [
    ("measure-anchors", "measure", "introduction: Lehmer's example and the smallest Pisot number", check_measure_anchors, False),
    ("range-sweeps", "bounds", "proof of the theorem: the three (k, s) range computations", check_range_sweeps, False),
    ("expression1", "bounds", "proof of the theorem: simplified form for k=7, s=11", check_expression1, False),
    ("lemma1", "lemma", "factorial product lemma, K <= 1000", check_lemma1, True),
    ("lemma2", "primes", "prime sum lemma, all three parts up to 10^5", check_lemma2, False),
    ("lemma3", "lemma", "positivity lemma, denominator product and region minimum", check_lemma3_region, False),
    ("vandermonde", "vandermonde", "determinant lemma and the V^2 decomposition", check_vandermonde, False),
    ("fermat", "vandermonde", "Fermat divisibility in the lower bound lemma", check_fermat, False),
    ("search", "search", "introduction: Lehmer's polynomial as the smallest degree-10 hit", check_search, False),
]


def run_suite(quick: bool = False, only: Optional[str] = None, jobs: int = 1) -> List[CheckResult]:
    results = []
    for name, group, location, fn, slow in CHECKS:
        if only and only not in (name, group):
            continue
        if quick and slow:
            results.append(CheckResult(name, group, location, SKIPPED, "skipped by --quick"))
            continue
        kwargs = {}
        if name == "range-sweeps":
            kwargs = {"jobs": jobs, "quick": quick}
        elif name == "lemma3":
            kwargs = {"jobs": jobs}
        t = time.perf_counter()
        try:
            ok, detail = fn(**kwargs)
            status = PASS if ok else FAIL
        except ArithmeticError as exc:
            status, detail = INCONCLUSIVE, str(exc)
        results.append(CheckResult(name, group, location, status, detail, time.perf_counter() - t))
    return results
