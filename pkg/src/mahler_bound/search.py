"""Exhaustive small-coefficient search for polynomials of small measure."""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import random
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from .interval import ApproxInterval
from .measure import MeasureError, mahler_measure
from .poly import IntPolynomial, is_reciprocal, is_root_of_unity_product, parse_polynomial

MAX_SPACE = 10**9
CHUNK = 512
SMYTH_POLY = "x^3-x-1"


class SearchSpaceTooLarge(ValueError):
    def __init__(self, estimate: int):
        super().__init__(f"search space of {estimate} candidates exceeds {MAX_SPACE}")
        self.estimate = estimate


@dataclass(frozen=True)
class SearchSpec:
    degree: int
    coeff_bound: int
    reciprocal_only: bool = False
    monic_only: bool = True
    measure_cutoff: Fraction = Fraction(13, 10)
    max_candidates: int = MAX_SPACE

    def __post_init__(self) -> None:
        if self.degree < 1 or self.coeff_bound < 1:
            raise ValueError("need degree >= 1 and coeff_bound >= 1")
        object.__setattr__(self, "measure_cutoff", Fraction(self.measure_cutoff))
        if self.measure_cutoff <= 1:
            raise ValueError("cutoff must exceed 1")

    def digest(self) -> str:
        payload = json.dumps({k: str(v) for k, v in asdict(self).items()}, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class SearchHit:
    polynomial: IntPolynomial
    measure: ApproxInterval
    reciprocal: bool
    cyclotomic_factor: bool = False

    def to_json(self) -> dict:
        m = self.measure.to_json()
        return {
            "polynomial": self.polynomial.to_text(),
            "coeffs": [str(c) for c in self.polynomial.coeffs],
            "measure_lo": m["lo"],
            "measure_hi": m["hi"],
            "reciprocal": self.reciprocal,
            "cyclotomic_factor": self.cyclotomic_factor,
        }


# ---------------------------------------------------------------------------
# enumeration; vectors are written highest degree first (a_d, ..., a_0)


def _leading_choices(spec: SearchSpec) -> List[int]:
    return [1] if spec.monic_only else list(range(1, spec.coeff_bound + 1))


def estimate_space(spec: SearchSpec) -> int:
    """Raw candidate count before symmetry reduction."""
    width = 2 * spec.coeff_bound + 1
    lead = len(_leading_choices(spec))
    if spec.reciprocal_only:
        # palindromes: a_d = a_0 is the leading choice, a_{d-1}..a_{d - d//2} are free
        return lead * width ** (spec.degree // 2)
    return lead * width**spec.degree


def _raw_vectors(spec: SearchSpec) -> Iterator[Tuple[int, ...]]:
    B = spec.coeff_bound
    # values run from +B down to -B, so the first orbit member met is the largest
    rng = range(B, -B - 1, -1)
    d = spec.degree
    for lead in _leading_choices(spec):
        if spec.reciprocal_only:
            if d == 1:
                yield (lead, lead)
                continue
            # a_i = a_{d-i}; free middle coefficients a_{d-1}, ..., a_{ceil(d/2)}
            for half in itertools.product(rng, repeat=d // 2):
                # half = (a_{d-1}, ..., a_{d - d//2})
                vec = [lead, *half]
                if d % 2 == 0:
                    vec += list(reversed(half[:-1]))
                else:
                    vec += list(reversed(half))
                vec.append(lead)
                yield tuple(vec)
        else:
            for rest in itertools.product(rng, repeat=d):
                yield (lead, *rest)


def _to_poly(vec: Sequence[int]) -> IntPolynomial:
    return IntPolynomial(reversed(vec))


def _normalise(vec: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(-c for c in vec) if vec[0] < 0 else vec


def _orbit(vec: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    """Images under reversal and X -> -X, sign-normalised."""
    d = len(vec) - 1
    neg = tuple(c if (d - i) % 2 == 0 else -c for i, c in enumerate(vec))
    out = [vec, _normalise(neg)]
    if vec[-1] != 0:
        rev = _normalise(tuple(reversed(vec)))
        out.append(rev)
        out.append(_normalise(tuple(c if (d - i) % 2 == 0 else -c for i, c in enumerate(rev))))
    return out


def symmetry_orbit(f: IntPolynomial) -> List[IntPolynomial]:
    """f with its images under reversal and X -> -X (same measure), deduplicated."""
    seen = []
    for vec in _orbit(tuple(reversed(f.coeffs))):
        if vec[0] == 0:
            continue
        p = _to_poly(vec)
        if p not in seen:
            seen.append(p)
    return seen


def _in_space(vec: Tuple[int, ...], spec: SearchSpec) -> bool:
    if vec[0] not in _leading_choices(spec):
        return False
    if any(abs(c) > spec.coeff_bound for c in vec):
        return False
    if spec.reciprocal_only and vec != tuple(reversed(vec)):
        return False
    return True


def _canonical(vec: Tuple[int, ...], spec: SearchSpec) -> bool:
    """Keep vec only if it is the first orbit member met in enumeration order."""
    return all(o <= vec for o in _orbit(vec) if _in_space(o, spec))


def enumerate_candidates(spec: SearchSpec, reduce_symmetry: bool = True) -> Iterator[IntPolynomial]:
    """Candidates in lexicographic order, coefficients from +B down to -B,
    constant term varying fastest."""
    est = estimate_space(spec)
    if est > min(spec.max_candidates, MAX_SPACE):
        raise SearchSpaceTooLarge(est)
    for vec in _raw_vectors(spec):
        if reduce_symmetry and not _canonical(vec, spec):
            continue
        yield _to_poly(vec)


# ---------------------------------------------------------------------------
# measuring


def _evaluate(poly: IntPolynomial, cutoff: Fraction) -> Optional[SearchHit]:
    """A hit when the certified measure lies in (1, cutoff]."""
    if poly.constant == 0:
        # X * g has the measure of the lower-degree g
        return None
    if cutoff < 2 and (abs(poly.constant) >= 2 or abs(poly.leading) >= 2):
        return None
    if abs(poly.leading) == 1 and is_root_of_unity_product(poly if poly.leading == 1 else -poly):
        return None
    try:
        res = mahler_measure(poly)
        m = res.measure
    except MeasureError as exc:
        if exc.enclosure is None:
            return None
        m = exc.enclosure
    if not m.certainly_gt(1) or not m.hi <= _cutoff_lo(cutoff):
        return None
    cyc = poly(1) == 0 or poly(-1) == 0
    return SearchHit(poly, m, is_reciprocal(poly), cyc)


def _cutoff_lo(cutoff: Fraction):
    return ApproxInterval.exact(cutoff).lo


def _evaluate_chunk(args) -> List[SearchHit]:
    vecs, cutoff = args
    hits = []
    for vec in vecs:
        h = _evaluate(_to_poly(vec), cutoff)
        if h is not None:
            hits.append(h)
    return hits


def _sort_hits(hits: List[SearchHit]) -> List[SearchHit]:
    return sorted(hits, key=lambda h: (h.measure.hi, h.polynomial.coeffs))


def _write_checkpoint(path: str, spec: SearchSpec, done: int, last: Optional[Tuple[int, ...]], hits) -> None:
    data = {
        "spec_hash": spec.digest(),
        "chunks_done": done,
        "last_vector": None if last is None else [str(c) for c in last],
        "hits": [h.polynomial.to_text() for h in hits],
    }
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".ckpt-")
    with os.fdopen(fd, "w") as fh:
        json.dump(data, fh, sort_keys=True)
    os.replace(tmp, path)


def _read_checkpoint(path: str, spec: SearchSpec) -> Tuple[int, List[IntPolynomial]]:
    if not os.path.exists(path):
        return 0, []
    with open(path) as fh:
        data = json.load(fh)
    if data.get("spec_hash") != spec.digest():
        raise ValueError("checkpoint belongs to a different search specification")
    return int(data["chunks_done"]), [parse_polynomial(t) for t in data["hits"]]


def find_small_measures(
    spec: SearchSpec, jobs: int = 1, checkpoint: Optional[str] = None
) -> List[SearchHit]:
    """All canonical candidates whose certified measure lies in (1, cutoff].

    With ``checkpoint`` the run resumes after the last completed chunk; hits
    recorded there are re-measured so the returned list is always certified.
    """
    est = estimate_space(spec)
    if est > min(spec.max_candidates, MAX_SPACE):
        raise SearchSpaceTooLarge(est)
    vecs = [v for v in _raw_vectors(spec) if _canonical(v, spec)]
    chunks = [vecs[i : i + CHUNK] for i in range(0, len(vecs), CHUNK)]
    done, previous = (0, []) if checkpoint is None else _read_checkpoint(checkpoint, spec)
    hits: List[SearchHit] = []
    for poly in previous:
        h = _evaluate(poly, spec.measure_cutoff)
        if h is not None:
            hits.append(h)
    todo = [(c, spec.measure_cutoff) for c in chunks[done:]]
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 and len(todo) > 1 else None
    try:
        stream = pool.map(_evaluate_chunk, todo) if pool else map(_evaluate_chunk, todo)
        for i, part in enumerate(stream, start=done + 1):
            hits.extend(part)
            if checkpoint is not None:
                _write_checkpoint(checkpoint, spec, i, chunks[i - 1][-1], hits)
    finally:
        if pool is not None:
            pool.shutdown()
    return _sort_hits(hits)


# ---------------------------------------------------------------------------
# non-reciprocal spot check


@dataclass
class SmythReport:
    sampled: int = 0
    skipped_reciprocal: int = 0
    violations: List[str] = field(default_factory=list)
    equality_cases: List[str] = field(default_factory=list)
    min_measure: Optional[ApproxInterval] = None
    min_polynomial: Optional[str] = None
    threshold: Optional[ApproxInterval] = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "sampled": str(self.sampled),
            "skipped_reciprocal": str(self.skipped_reciprocal),
            "violations": self.violations,
            "equality_cases": self.equality_cases,
            "min_measure": None if self.min_measure is None else self.min_measure.to_json(),
            "min_polynomial": self.min_polynomial,
            "threshold": None if self.threshold is None else self.threshold.to_json(),
            "passed": self.passed,
        }


def smallest_pisot() -> ApproxInterval:
    """Enclosure of the real root 1.3247... of x^3 - x - 1."""
    return mahler_measure(parse_polynomial(SMYTH_POLY)).measure


def smyth_check_one(
    f: IntPolynomial, threshold: Optional[ApproxInterval] = None
) -> Tuple[str, Optional[ApproxInterval]]:
    """('ok' | 'equal' | 'violation', measure) for a non-reciprocal f with f(0) != 0.

    Such an f has a non-reciprocal irreducible factor, whose measure is at
    least the smallest Pisot number; the measure is multiplicative and every
    factor's measure is >= 1.
    """
    if f.constant == 0 or is_reciprocal(f):
        raise ValueError("needs a non-reciprocal polynomial with nonzero constant term")
    threshold = threshold or smallest_pisot()
    try:
        m = mahler_measure(f).measure
    except MeasureError as exc:
        m = exc.enclosure
        if m is None:
            return "ok", None
    if m.lo >= threshold.lo and m.hi <= threshold.hi:
        return "equal", m
    if m.hi < threshold.lo:
        return "violation", m
    return "ok", m


def smyth_spot_check(
    sample_size: int = 500, degree: int = 6, coeff_bound: int = 3, seed: int = 0
) -> SmythReport:
    """Sample non-reciprocal integer polynomials of degree <= ``degree`` and
    check none has measure below the smallest Pisot number."""
    rng = random.Random(seed)
    threshold = smallest_pisot()
    rep = SmythReport(threshold=threshold)
    while rep.sampled < sample_size:
        d = rng.randint(1, degree)
        coeffs = [rng.randint(-coeff_bound, coeff_bound) for _ in range(d + 1)]
        if coeffs[0] == 0 or coeffs[-1] == 0:
            continue
        f = IntPolynomial(coeffs)
        if is_reciprocal(f):
            rep.skipped_reciprocal += 1
            continue
        rep.sampled += 1
        verdict, m = smyth_check_one(f, threshold)
        if verdict == "violation":
            rep.violations.append(f.to_text())
        elif verdict == "equal":
            rep.equality_cases.append(f.to_text())
        if m is not None and (rep.min_measure is None or m.hi < rep.min_measure.hi):
            rep.min_measure, rep.min_polynomial = m, f.to_text()
    return rep
