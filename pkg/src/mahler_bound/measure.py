"""Mahler measure, absolute logarithmic height and house as enclosures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from mpmath import iv, mp, mpf

from .interval import ApproxInterval, precision
from .poly import (
    IntPolynomial,
    is_reciprocal,
    is_root_of_unity_product,
    split_cyclotomic,
    squarefree_decomposition,
)
from .roots import RootFindingError, RootSet, roots

DEFAULT_PRECISION = 256
MAX_PRECISION = 16384


class MeasureError(RuntimeError):
    """No enclosure of the requested width was reached at maximum precision.

    ``enclosure`` holds the tightest valid enclosure that was obtained.
    """

    def __init__(self, message: str, enclosure: Optional[ApproxInterval] = None):
        super().__init__(message)
        self.enclosure = enclosure


@dataclass(frozen=True)
class MeasureResult:
    measure: ApproxInterval
    log_measure: ApproxInterval
    degree: int
    reciprocal: bool
    root_of_unity: bool
    precision_bits: int = DEFAULT_PRECISION

    def to_json(self, digits: int = 30) -> dict:
        m = self.measure.to_json(digits)
        lm = self.log_measure.to_json(digits)
        return {
            "measure_lo": m["lo"],
            "measure_hi": m["hi"],
            "log_measure_lo": lm["lo"],
            "log_measure_hi": lm["hi"],
            "degree": str(self.degree),
            "reciprocal": self.reciprocal,
            "root_of_unity": self.root_of_unity,
        }


def _unit_root_product(f: IntPolynomial) -> bool:
    if abs(f.leading) != 1 or f.constant == 0:
        return False
    return is_root_of_unity_product(f if f.leading == 1 else -f)


def _measure_from_roots(lead: int, rs: RootSet) -> ApproxInterval:
    one = iv.mpf(1)
    m = iv.mpf(abs(lead))
    for mod in rs.root_moduli():
        lo = mod.lo if mod.lo > 1 else mpf(1)
        hi = mod.hi if mod.hi > 1 else mpf(1)
        m = m * iv.mpf([lo, hi])
    return ApproxInterval.from_iv(m * one)


def _finite_interval(x: ApproxInterval) -> bool:
    return bool(mp.isfinite(x.lo) and mp.isfinite(x.hi))


def _refine(
    f: IntPolynomial,
    precision_bits: int,
    max_precision: int,
    compute,
    label: str,
    target: Optional[mpf] = None,
):
    """Double the working precision until ``compute(roots)`` is narrow enough."""
    if target is None:
        target = mpf(2) ** (8 - precision_bits / 2)
    bits = precision_bits
    best = None
    while bits <= max_precision:
        try:
            with precision(bits + 16):
                rs = roots(f, bits)
                value = compute(rs)
        except RootFindingError:
            bits *= 2
            continue
        if not _finite_interval(value):
            bits *= 2
            continue
        if best is None or value.width < best.width:
            best = value
        if value.relative_width() <= target:
            return value, bits
        bits *= 2
    raise MeasureError(
        f"{label} enclosure did not reach relative width {target} by {max_precision} bits",
        best,
    )


def _core_measure(core: IntPolynomial, precision_bits: int, max_precision: int):
    """M(core) via the squarefree decomposition: M(c prod g_i^i) = |c| prod M(g_i)^i.

    Working on squarefree parts keeps every root simple, so the certified
    disks shrink like 2^-bits instead of 2^-(bits/multiplicity).
    """
    content, parts = squarefree_decomposition(core)
    total = sum(mult for _, mult in parts) or 1
    target = mpf(2) ** (8 - precision_bits / 2) / (2 * total)
    acc = iv.mpf(abs(content))
    bits = precision_bits
    for g, mult in parts:
        value, used = _refine(
            g,
            precision_bits,
            max_precision,
            lambda rs, g=g: _measure_from_roots(g.leading, rs),
            "measure",
            target,
        )
        bits = max(bits, used)
        with precision(bits + 16):
            acc = acc * value.to_iv() ** mult
    with precision(bits + 16):
        return ApproxInterval.from_iv(acc), bits


def mahler_measure(
    f: IntPolynomial,
    precision_bits: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
) -> MeasureResult:
    """Certified enclosure of M(f) = |a_d| prod max(1, |alpha_i|).

    Cyclotomic factors are divided out exactly first (they contribute 1), so
    roots of unity never sit as unresolved disks on the unit circle.
    """
    if precision_bits < 53:
        raise ValueError("precision_bits must be >= 53")
    d = f.degree
    reciprocal = is_reciprocal(f) if f.constant != 0 else False
    unit = d == 0 or _unit_root_product(f)
    floor_value = max(abs(f.leading), abs(f.constant))
    bits = precision_bits
    with precision(precision_bits + 16):
        if d == 0:
            m = ApproxInterval.exact(abs(f.leading))
        elif unit:
            m = ApproxInterval.exact(1)
        else:
            _, g = f.strip_x()
            _, core = split_cyclotomic(g)
            m, bits = _core_measure(core, precision_bits, max_precision)
    with precision(bits + 16):
        # M(f) >= max(|a_d|, |a_0|) holds exactly (Jensen), so the lower end may be lifted
        fl = ApproxInterval.exact(floor_value).lo  # never rounds above the true integer
        if m.lo < fl:
            m = ApproxInterval(fl, max(m.hi, fl))
        log_m = ApproxInterval.from_iv(iv.log(m.to_iv()))
    return MeasureResult(m, log_m, d, reciprocal, unit and d > 0, bits)


def height(f: IntPolynomial, precision_bits: int = DEFAULT_PRECISION) -> ApproxInterval:
    """Absolute logarithmic height log M(f) / deg f."""
    if f.degree < 1:
        raise ValueError("height needs degree >= 1")
    res = mahler_measure(f, precision_bits)
    with precision(res.precision_bits + 16):
        return ApproxInterval.from_iv(res.log_measure.to_iv() / f.degree)


def _house_from_roots(rs: RootSet, extra: List[ApproxInterval]) -> ApproxInterval:
    mods = rs.root_moduli() + extra
    return ApproxInterval(max(m.lo for m in mods), max(m.hi for m in mods))


def house(f: IntPolynomial, precision_bits: int = DEFAULT_PRECISION) -> ApproxInterval:
    """Enclosure of the largest root modulus."""
    if f.degree < 1:
        raise ValueError("house needs degree >= 1")
    zeros, g = f.strip_x()
    cyc, core = split_cyclotomic(g)
    extra = []
    if cyc:
        extra.append(ApproxInterval.exact(1))
    if zeros:
        extra.append(ApproxInterval.exact(0))
    if core.degree == 0:
        return ApproxInterval(max(e.lo for e in extra), max(e.hi for e in extra))
    _, parts = squarefree_decomposition(core)
    values = list(extra)
    for g, _ in parts:
        value, _ = _refine(g, precision_bits, MAX_PRECISION, lambda rs: _house_from_roots(rs, []), "house")
        values.append(value)
    return ApproxInterval(max(v.lo for v in values), max(v.hi for v in values))
