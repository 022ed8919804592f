"""Certified finite checks of the analytic inequalities behind the bound.

Positivity over a parameter box is established by branch and bound: the
box is cut into cells of the grid step, each cell is evaluated in interval
arithmetic, and cells whose enclosure is not strictly positive are split
until they are either certified or a point in them is certified to violate
the inequality.  These are certificates at the sampled d values, not proofs
over the continuum of d.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from mpmath import iv

from .interval import ApproxInterval, enclose, lower, precision, upper
from .primes import LemmaReport

BITS = 96
DEFAULT_STEP = Fraction(1, 100)
DEFAULT_D_SAMPLES: Tuple[int, ...] = (
    10001,
    10**5,
    10**8,
    10**12,
    10**18,
    10**30,
    10**100,
    10**300,
)
MAX_DEPTH = 24

Box = Tuple[Tuple[Fraction, Fraction], ...]


@dataclass(frozen=True)
class RegionBox:
    """k1 in [k1_lo, k1_hi], s1 in [s1_lo, s1_hi], plus an optional linear tie.

    ``constraint`` names the tie: "k1<=1.05*s1" or "k1-0.06<=s1<=k1".
    """

    k1_lo: Fraction
    k1_hi: Fraction
    s1_lo: Fraction
    s1_hi: Fraction
    constraint: Optional[str] = None

    def __post_init__(self) -> None:
        if not (self.k1_lo <= self.k1_hi and self.s1_lo <= self.s1_hi):
            raise ValueError("empty region")

    def contains(self, k1: Fraction, s1: Fraction) -> bool:
        if not (self.k1_lo <= k1 <= self.k1_hi and self.s1_lo <= s1 <= self.s1_hi):
            return False
        if self.constraint == "k1<=1.05*s1":
            return k1 <= Fraction(105, 100) * s1
        if self.constraint == "k1-0.06<=s1<=k1":
            return k1 - Fraction(6, 100) <= s1 <= k1
        return True

    def meets(self, box: Box) -> bool:
        """Whether a cell can intersect the region (conservative)."""
        (klo, khi), (slo, shi) = box
        if self.constraint == "k1<=1.05*s1":
            return klo <= Fraction(105, 100) * shi
        if self.constraint == "k1-0.06<=s1<=k1":
            return slo <= khi and shi >= klo - Fraction(6, 100)
        return True

    def to_json(self) -> dict:
        return {
            "k1": [str(self.k1_lo), str(self.k1_hi)],
            "s1": [str(self.s1_lo), str(self.s1_hi)],
            "constraint": self.constraint,
        }


@dataclass
class GridCertificate:
    region: RegionBox
    d_samples: Tuple[int, ...]
    step: Fraction
    min_value: Optional[ApproxInterval] = None
    failures: List[dict] = field(default_factory=list)
    cells: int = 0
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, str] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and all(self.checks.values())

    def merge_min(self, value: ApproxInterval) -> None:
        if self.min_value is None:
            self.min_value = value
        else:
            self.min_value = ApproxInterval(min(self.min_value.lo, value.lo), min(self.min_value.hi, value.hi))

    def to_json(self) -> dict:
        mv = None if self.min_value is None else self.min_value.to_json()
        return {
            "region": self.region.to_json(),
            "d_samples": [_d_label(d) for d in self.d_samples],
            "step": str(self.step),
            "min_value_lo": None if mv is None else mv["lo"],
            "min_value_hi": None if mv is None else mv["hi"],
            "failures": self.failures,
            "cells": str(self.cells),
            "checks": self.checks,
            "details": self.details,
            "notes": self.notes,
            "passed": self.passed,
        }


def _d_label(d: int) -> str:
    if d >= 10**6 and 10 ** round(math.log10(d)) == d:
        return f"1e{round(math.log10(d))}"
    return str(d)


# ---------------------------------------------------------------------------
# branch and bound


@dataclass
class _Search:
    min_lo: Optional[object] = None
    min_hi: Optional[object] = None
    cells: int = 0
    failures: List[Tuple[Fraction, ...]] = field(default_factory=list)
    unresolved: List[Box] = field(default_factory=list)


def _iv_box(box: Box):
    return [iv.mpf([lower(enclose(lo)), upper(enclose(hi))]) for lo, hi in box]


def _split(box: Box) -> List[Box]:
    axis = max(range(len(box)), key=lambda i: box[i][1] - box[i][0])
    lo, hi = box[axis]
    mid = (lo + hi) / 2
    left = list(box)
    right = list(box)
    left[axis] = (lo, mid)
    right[axis] = (mid, hi)
    return [tuple(left), tuple(right)]


def _grid(bounds: Box, step: Fraction) -> List[Box]:
    axes = []
    for lo, hi in bounds:
        cuts = [lo]
        while cuts[-1] + step < hi:
            cuts.append(cuts[-1] + step)
        cuts.append(hi)
        axes.append([(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)])
    boxes: List[Box] = [()]
    for ax in axes:
        boxes = [b + (c,) for b in boxes for c in ax]
    return boxes


def branch_and_bound(
    fn: Callable,
    bounds: Box,
    step: Fraction,
    threshold: Fraction = Fraction(0),
    keep: Optional[Callable[[Box], bool]] = None,
    inside: Optional[Callable[..., bool]] = None,
    max_depth: int = MAX_DEPTH,
) -> _Search:
    """Certify fn > threshold on every cell; fn receives iv intervals."""
    out = _Search()
    thr = enclose(threshold)
    stack = [(b, 0) for b in _grid(bounds, step)]
    while stack:
        box, depth = stack.pop()
        if keep is not None and not keep(box):
            continue
        out.cells += 1
        val = fn(*_iv_box(box))
        if lower(val) > upper(thr):
            lo = lower(val)
            if out.min_lo is None or lo < out.min_lo:
                out.min_lo = lo
            centre = tuple((a + b) / 2 for a, b in box)
            if inside is None or inside(*centre):
                pv = fn(*[enclose(c) for c in centre])
                if out.min_hi is None or upper(pv) < out.min_hi:
                    out.min_hi = upper(pv)
            continue
        # a vertex or the centre may already be a counterexample
        pts = [tuple((a + b) / 2 for a, b in box)] + [tuple(c) for c in _corners(box)]
        bad = None
        for p in pts:
            if inside is not None and not inside(*p):
                continue
            if upper(fn(*[enclose(c) for c in p])) <= lower(thr):
                bad = p
                break
        if bad is not None:
            out.failures.append(bad)
            continue
        if depth >= max_depth:
            out.unresolved.append(box)
            continue
        stack.extend((b, depth + 1) for b in _split(box))
    return out


def _corners(box: Box) -> List[Tuple[Fraction, ...]]:
    pts: List[Tuple[Fraction, ...]] = [()]
    for lo, hi in box:
        pts = [p + (v,) for p in pts for v in (lo, hi)]
    return pts


def _record(cert: GridCertificate, res: _Search, label: str) -> None:
    cert.cells += res.cells
    for p in res.failures:
        cert.failures.append({"at": label, "point": [str(x) for x in p], "kind": "violation"})
    for b in res.unresolved:
        cert.failures.append({"at": label, "box": [[str(a), str(c)] for a, c in b], "kind": "unresolved"})
    if res.min_lo is not None:
        hi = res.min_hi if res.min_hi is not None else res.min_lo
        cert.merge_min(ApproxInterval(res.min_lo, max(hi, res.min_lo)))


# ---------------------------------------------------------------------------
# factorial products


def check_lemma1(K_max: int, bits: int = BITS) -> LemmaReport:
    """Certify sum_{k<K} log k! >= K^2 log K / 2 - 3K^2/4 for 1 <= K <= K_max."""
    if K_max < 1:
        raise ValueError("K_max must be >= 1")
    rep = LemmaReport("factorial_product", (1, K_max), precision_bits=bits)
    with precision(bits):
        lhs = iv.mpf(0)
        fact = 1
        for K in range(1, K_max + 1):
            if K >= 2:
                fact *= K - 1
                lhs = lhs + iv.log(iv.mpf(fact))
            rhs = iv.mpf(K * K) * iv.log(iv.mpf(K)) / 2 - enclose(Fraction(3 * K * K, 4))
            rep.checked += 1
            rep.note_slack(K, ApproxInterval.from_iv(lhs - rhs))
            if not lower(lhs) >= upper(rhs):
                rep.failures.append(K)
    return rep


# ---------------------------------------------------------------------------
# the positivity lemma for d > 10000


def _logs(d: int):
    L = iv.log(iv.mpf(d))
    ll = iv.log(L)
    return L, ll, iv.log(ll)


def lemma3_constants(d: int, bits: int = BITS) -> Dict[str, ApproxInterval]:
    """A = 2 log d/(log log d)^2, f1, f2 at d."""
    with precision(bits):
        L, ll, lll = _logs(d)
        A = 2 * L / ll**2
        f1 = 1 - lll / ll - enclose(Fraction("1.07")) / ll
        f2 = 2 - 2 * lll / ll - enclose(Fraction("2.39")) / ll
        return {k: ApproxInterval.from_iv(v) for k, v in (("A", A), ("f1", f1), ("f2", f2))}


# (d_lo, d_hi, a, b, c, reference lower bound of g1(1.2,1.2), reference roots)
SURROGATES = (
    (10**4, 10**8, "3.73", "0.27", "0.45", "0.05", ("0.978", "2.044")),
    (10**8, 10**12, "4.34", "0.32", "0.56", "0.0066", ("1.165", "1.801")),
    (10**12, 10**18, "5.01", "0.36", "0.66", "0.0049", ("1.179", "1.865")),
    (10**18, 10**30, "5.97", "0.41", "0.76", "0.064", ("1.033", "2.152")),
    (10**30, 10**100, "7.7", "0.5", "0.94", "0.17", ("0.921", "2.447")),
    (10**100, None, "15.56", "1", "2", "0.245", ("0.996", "2.407")),
)


def surrogate_value(a: str, b: str, c: str, k1, s1):
    """a k1 s1 log s1 - b k1^2 - c s1 on iv arguments."""
    return enclose(a) * k1 * s1 * iv.log(s1) - enclose(b) * k1**2 - enclose(c) * s1


def surrogate_roots(a: str, b: str, c: str, s1: Fraction = Fraction("1.2")):
    """Roots in k1 of the quadratic a s1 log s1 k1 - b k1^2 - c s1."""
    S = enclose(s1)
    B = enclose(a) * S * iv.log(S)
    disc = B**2 - 4 * enclose(b) * enclose(c) * S
    sq = iv.sqrt(disc)
    two_b = 2 * enclose(b)
    return (B - sq) / two_b, (B + sq) / two_b


def _truncation_matches(x, reference: str) -> bool:
    """x lies in [reference, reference + one unit in the last reference digit)."""
    p = Fraction(reference)
    unit = Fraction(1, 10 ** len(reference.split(".")[1]))
    return lower(x) >= upper(enclose(p)) and upper(x) < lower(enclose(p + unit))


def replay_surrogates(bits: int = BITS) -> Tuple[Dict[str, bool], Dict[str, str]]:
    checks: Dict[str, bool] = {}
    details: Dict[str, str] = {}
    k_lo, k_hi = Fraction("1.2"), Fraction("1.6")
    with precision(bits):
        for i, (dlo, dhi, a, b, c, g_lo, (r1, r2)) in enumerate(SURROGATES, 1):
            tag = f"surrogate{i}"
            g = surrogate_value(a, b, c, enclose(Fraction("1.2")), enclose(Fraction("1.2")))
            details[f"{tag}.g(1.2,1.2)"] = str(ApproxInterval.from_iv(g))
            if i == len(SURROGATES):
                checks[f"{tag}.value"] = _truncation_matches(g, g_lo)
            else:
                checks[f"{tag}.value"] = lower(g) > upper(enclose(g_lo))
            lo_root, hi_root = surrogate_roots(a, b, c)
            details[f"{tag}.roots"] = f"{ApproxInterval.from_iv(lo_root)} {ApproxInterval.from_iv(hi_root)}"
            checks[f"{tag}.roots"] = _truncation_matches(lo_root, r1) and _truncation_matches(hi_root, r2)
            checks[f"{tag}.roots_bracket_k1_range"] = (
                upper(lo_root) < lower(enclose(k_lo)) and lower(hi_root) > upper(enclose(k_hi))
            )
            # d/ds1 = a k1 (log s1 + 1) - c is smallest at k1 = s1 = 1.2
            ds = enclose(a) * enclose(k_lo) * (iv.log(enclose(Fraction("1.2"))) + 1) - enclose(c)
            checks[f"{tag}.ds1_positive"] = lower(ds) > 0
            # A increases past exp(e^2) and f1, f2 increase past e^e, so the
            # surrogate is below g on the whole d-range when it is below at the ends
            left = lemma3_constants(dlo, bits)
            checks[f"{tag}.A_at_left"] = left["A"].lo >= upper(enclose(a))
            details[f"{tag}.A({_d_label(dlo)})"] = str(left["A"])
            if dhi is not None:
                right = lemma3_constants(dhi, bits)
                checks[f"{tag}.f1_at_right"] = right["f1"].hi <= lower(enclose(b))
                checks[f"{tag}.f2_at_right"] = right["f2"].hi <= lower(enclose(c))
                details[f"{tag}.f1,f2({_d_label(dhi)})"] = f"{right['f1']} {right['f2']}"
            else:
                # for d > 10^100, log log log d > 0 so f1 < 1 and f2 < 2
                _, _, lll = _logs(dlo)
                checks[f"{tag}.f_limits"] = lower(lll) > 0
    return checks, details


def _lemma3_sample(args):
    d, step, s1_cap, bits = args
    with precision(bits):
        L, ll, lll = _logs(d)
        A = 2 * L / ll**2
        f1 = 1 - lll / ll - enclose(Fraction("1.07")) / ll
        f2 = 2 - 2 * lll / ll - enclose(Fraction("2.39")) / ll

        def g(k1, s1):
            return A * k1 * s1 * iv.log(s1) - f1 * k1**2 - f2 * s1

        bounds = ((Fraction("1.2"), Fraction("1.6")), (Fraction("1.2"), s1_cap))
        return d, branch_and_bound(g, bounds, step)


def check_lemma3(
    d_samples: Sequence[int] = DEFAULT_D_SAMPLES,
    grid_step: Fraction = DEFAULT_STEP,
    s1_cap: Fraction = Fraction(2),
    jobs: int = 1,
    bits: int = BITS,
) -> GridCertificate:
    """g(d, k1, s1) > 0 on 1.2 <= k1 <= 1.6, 1.2 <= s1 <= s1_cap at each sampled d > 10000."""
    if any(d <= 10000 for d in d_samples):
        raise ValueError("all d samples must exceed 10000")
    step = Fraction(grid_step)
    cap = Fraction(s1_cap)
    region = RegionBox(Fraction("1.2"), Fraction("1.6"), Fraction("1.2"), cap)
    cert = GridCertificate(region, tuple(d_samples), step)
    cert.notes.append(f"s1 is capped at {cap}; the inequality is claimed for all s1 >= 1.2")
    cert.notes.append("certificate at sampled d values only")
    tasks = [(d, step, cap, bits) for d in d_samples]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_lemma3_sample, tasks))
    else:
        results = [_lemma3_sample(t) for t in tasks]
    for d, res in sorted(results, key=lambda r: r[0]):
        _record(cert, res, f"d={_d_label(d)}")
    checks, details = replay_surrogates(bits)
    cert.checks.update(checks)
    cert.details.update(details)
    return cert


# ---------------------------------------------------------------------------
# the denominator product


def denominator_g(k1, s1, L, ll, lll):
    """(2 lll - log s1)/(2 ll) - k1 ll^2 / (1.128 s1^2 L^3) - k1 ll / (s1 L)."""
    return (
        (2 * lll - iv.log(s1)) / (2 * ll)
        - k1 * ll**2 / (enclose(Fraction("1.128")) * s1**2 * L**3)
        - k1 * ll / (s1 * L)
    )


def denominator_g_integer_form(k1, s1, L, ll, lll, log_s1=None):
    """The same quantity over the common denominator 282 s1^2 L^3 ll."""
    ls = iv.log(s1) if log_s1 is None else log_s1
    num = (
        282 * s1**2 * L**3 * lll
        - 141 * s1**2 * ls * L**3
        - 282 * k1 * s1 * L**2 * ll**2
        - 250 * k1 * ll**3
    )
    return num / (282 * s1**2 * L**3 * ll)


def check_denominator_product(
    d_samples: Sequence[int] = DEFAULT_D_SAMPLES,
    grid_step: Fraction = DEFAULT_STEP,
    bits: int = BITS,
) -> GridCertificate:
    """Positivity of the denominator-product function on 1.2 <= s1 <= 1.51, 1.2 <= k1 <= 1.05 s1."""
    if any(d <= 10000 for d in d_samples):
        raise ValueError("all d samples must exceed 10000")
    step = Fraction(grid_step)
    region = RegionBox(Fraction("1.2"), Fraction("1.5855"), Fraction("1.2"), Fraction("1.51"), "k1<=1.05*s1")
    cert = GridCertificate(region, tuple(d_samples), step)
    cert.notes.append("certificate at sampled d values only")
    samples = sorted(set(d_samples) | {10001})
    with precision(bits):
        for d in samples:
            L, ll, lll = _logs(d)
            label = _d_label(d)
            r2 = ll**2 / L
            r1 = ll / L
            cert.checks[f"ll^2/L<0.54 at {label}"] = upper(r2) < lower(enclose(Fraction("0.54")))
            cert.checks[f"ll/L<0.25 at {label}"] = upper(r1) < lower(enclose(Fraction("0.25")))
            cert.details[f"ll^2/L at {label}"] = str(ApproxInterval.from_iv(r2))
            cert.details[f"ll/L at {label}"] = str(ApproxInterval.from_iv(r1))
            # increasing in s1, so s1 = 1.2 is the worst case
            s = enclose(Fraction("1.2"))
            reduced = 69 * s * L**3 - 2625 * ll**3 - 41 * L**3
            cert.checks[f"69 s1 L^3 - 2625 ll^3 > 41 L^3 at {label}"] = lower(reduced) > 0
            # the step dropping to 69 s1 L^3 uses 2820 lll - 1410 log 1.51 - 2961 * 0.54 >= 69
            chain = 2820 * lll - 1410 * iv.log(enclose(Fraction("1.51"))) - 2961 * enclose(Fraction("0.54"))
            cert.checks[f"coefficient chain >= 69 at {label}"] = lower(chain) >= 69
            cert.details[f"coefficient chain at {label}"] = str(ApproxInterval.from_iv(chain))
            for k1, s1 in ((Fraction("1.2"), Fraction("1.2")), (Fraction("1.5"), Fraction("1.45"))):
                a = denominator_g(enclose(k1), enclose(s1), L, ll, lll)
                b = denominator_g_integer_form(enclose(k1), enclose(s1), L, ll, lll)
                ok = not (upper(a) < lower(b) or upper(b) < lower(a))
                cert.checks.setdefault(f"integer form agrees at {label}", True)
                cert.checks[f"integer form agrees at {label}"] &= ok
            if d not in d_samples:
                continue

            def g(k1, s1, L=L, ll=ll, lll=lll):
                return denominator_g(k1, s1, L, ll, lll)

            res = branch_and_bound(
                g,
                ((region.k1_lo, region.k1_hi), (region.s1_lo, region.s1_hi)),
                step,
                keep=region.meets,
                inside=region.contains,
            )
            _record(cert, res, f"d={label}")
    return cert


# ---------------------------------------------------------------------------
# minimising f(k1, s1) = (2.528 k1 s1 - k1^2 - s1) / (2.256 s1^3)

F_NUM = Fraction("2.528")
F_DEN = Fraction("2.256")


def f_exact(k1: Fraction, s1: Fraction) -> Fraction:
    return (F_NUM * k1 * s1 - k1 * k1 - s1) / (F_DEN * s1**3)


def f_iv(k1, s1):
    return (enclose(F_NUM) * k1 * s1 - k1**2 - s1) / (enclose(F_DEN) * s1**3)


def df_dk1(k1: Fraction, s1: Fraction) -> Fraction:
    """Closed form (158 s1 - 125 k1) / (141 s1^3)."""
    return (158 * s1 - 125 * k1) / (141 * s1**3)


def df_ds1(k1: Fraction, s1: Fraction) -> Fraction:
    """Closed form (375 k1^2 - 632 k1 s1 + 250 s1) / (282 s1^4)."""
    return (375 * k1 * k1 - 632 * k1 * s1 + 250 * s1) / (282 * s1**4)


def stationary_point() -> Tuple[Fraction, Fraction]:
    """Unique interior zero of both partials: k1 = (158/125) s1 substituted in the second."""
    r = Fraction(158, 125)
    # s1 * ((375 r^2 - 632 r) s1 + 250) = 0, s1 != 0
    s1 = Fraction(-250) / (375 * r * r - 632 * r)
    return r * s1, s1


def _edge_point(kind: str, const: str, s, wrap):
    """(k1, s1) on an edge; ``wrap`` is Fraction for exact use, enclose for intervals."""
    if kind == "fixed":
        return wrap(Fraction(const)), s
    return s + wrap(Fraction(const)), s


# edges of the region: (name, kind, constant, s1 range, closed form, reference bound)
F_EDGES = (
    ("k1=1.26", "fixed", "1.26", ("1.2", "1.26"), lambda s: (27316 * s - 19845) / (28200 * s**3), "0.2583"),
    ("k1=1.51", "fixed", "1.51", ("1.45", "1.51"), lambda s: (140864 * s - 114005) / (112800 * s**3), "0.2541"),
    (
        "k1=s1+0.06",
        "shift",
        "0.06",
        ("1.2", "1.45"),
        lambda s: (19100 * s**2 - 12104 * s - 45) / (28200 * s**3),
        "0.2624",
    ),
    ("k1=s1", "shift", "0", ("1.26", "1.51"), lambda s: (191 * s - 125) / (282 * s**2), "0.2541"),
)


@dataclass
class MinimizationReport:
    stationary: Tuple[Fraction, Fraction]
    stationary_outside: bool
    edges: Dict[str, dict]
    region_min: Optional[ApproxInterval]
    region_failures: List[dict]
    cells: int
    step: Fraction

    @property
    def passed(self) -> bool:
        return (
            self.stationary_outside
            and not self.region_failures
            and all(e["closed_form_matches"] and e["min_at_least_reference"] for e in self.edges.values())
            and self.region_min is not None
            and self.region_min.certainly_gt(Fraction(1, 4))
        )

    def to_json(self) -> dict:
        return {
            "stationary_point": {"k1": str(self.stationary[0]), "s1": str(self.stationary[1])},
            "stationary_outside_region": self.stationary_outside,
            "edges": self.edges,
            "region_min": None if self.region_min is None else self.region_min.to_json(),
            "region_failures": self.region_failures,
            "cells": str(self.cells),
            "step": str(self.step),
            "passed": self.passed,
        }


def minimize_f_region(grid_step: Fraction = DEFAULT_STEP, bits: int = BITS) -> MinimizationReport:
    """Certify f > 1/4 on 1.26 <= k1 <= 1.51, k1 - 0.06 <= s1 <= k1."""
    step = Fraction(grid_step)
    region = RegionBox(Fraction("1.26"), Fraction("1.51"), Fraction("1.2"), Fraction("1.51"), "k1-0.06<=s1<=k1")
    k1s, s1s = stationary_point()
    outside = not region.contains(k1s, s1s)
    edges: Dict[str, dict] = {}
    with precision(bits):
        for name, kind, const, (lo, hi), closed, reference in F_EDGES:
            lo, hi = Fraction(lo), Fraction(hi)
            exact_point = lambda s, kind=kind, const=const: _edge_point(kind, const, s, Fraction)
            # rational functions of degree <= 3 over s1^3: agreement at 8 points is an identity
            pts = [lo + (hi - lo) * Fraction(i, 7) for i in range(8)]
            matches = all(f_exact(*exact_point(s)) == closed(s) for s in pts)

            def edge_fn(s, kind=kind, const=const):
                return f_iv(*_edge_point(kind, const, s, enclose))

            res = branch_and_bound(edge_fn, ((lo, hi),), step / 4, threshold=Fraction(reference))
            nodes = []
            x = lo
            while x <= hi:
                nodes.append(x)
                x += step
            if nodes[-1] != hi:
                nodes.append(hi)
            vals = [(f_exact(*exact_point(s)), s) for s in nodes]
            best_val, best_s = min(vals)
            edges[name] = {
                "closed_form_matches": matches,
                "grid_min_at_s1": str(best_s),
                "grid_min_value": f"{float(best_val):.6f}",
                "certified_lower_bound": None if res.min_lo is None else str(ApproxInterval(res.min_lo, res.min_lo)),
                "reference_bound": reference,
                "min_at_least_reference": not res.failures and not res.unresolved,
            }
        bounds = ((region.k1_lo, region.k1_hi), (region.s1_lo, region.s1_hi))
        res = branch_and_bound(f_iv, bounds, step, threshold=Fraction(1, 4), keep=region.meets, inside=region.contains)
    failures = [{"point": [str(x) for x in p], "kind": "violation"} for p in res.failures]
    failures += [{"box": [[str(a), str(b)] for a, b in bx], "kind": "unresolved"} for bx in res.unresolved]
    rmin = None
    if res.min_lo is not None:
        rmin = ApproxInterval(res.min_lo, max(res.min_hi or res.min_lo, res.min_lo))
    return MinimizationReport((k1s, s1s), outside, edges, rmin, failures, res.cells, step)
