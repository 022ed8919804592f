"""Outward-rounded real enclosures.

All interval arithmetic is delegated to mpmath's ``iv`` context, which rounds
lower endpoints toward -inf and upper endpoints toward +inf.  This module adds
a small immutable result type plus exact conversion helpers so that
certificates can be checked and serialized without going through binary
floats.
"""

from __future__ import annotations

import decimal
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from mpmath import iv, mp, mpf
from mpmath.ctx_iv import ivmpc, ivmpf

Number = Union[int, Fraction, float, str, mpf]

DEFAULT_PRECISION = 64
SERIAL_DIGITS = 30


@contextmanager
def precision(bits: int) -> Iterator[None]:
    """Run a block with the interval context at ``bits`` of working precision."""
    if bits < 53:
        raise ValueError("precision must be at least 53 bits")
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def lower(x: ivmpf) -> mpf:
    """Exact lower endpoint (``mpf(x.a)`` would round at mp.prec)."""
    return mp.make_mpf(x._mpi_[0])


def upper(x: ivmpf) -> mpf:
    return mp.make_mpf(x._mpi_[1])


def mpf_to_fraction(x: mpf) -> Fraction:
    """Exact rational value of a finite binary float."""
    if not mp.isfinite(x):
        raise ValueError(f"non-finite value {x}")
    # mpf(x) would re-round to mp.prec; read the stored tuple instead
    sign, man, exp, _ = (x if isinstance(x, mpf) else mpf(x))._mpf_
    man, exp = (-int(man) if sign else int(man)), int(exp)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def enclose(value: Number) -> ivmpf:
    """Tightest current-precision enclosure of an exact value.

    Fractions are enclosed by dividing two exact integer enclosures; strings
    are parsed as exact decimals (``"0.564"`` is 564/1000, not a float).
    """
    if isinstance(value, ivmpf):
        return value
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return iv.mpf(value.numerator)
        return iv.mpf(value.numerator) / iv.mpf(value.denominator)
    # ints, binary floats and mpf values convert exactly (up to precision)
    return iv.mpf(value)


def _fmt(q: Fraction, rounding: str, digits: int) -> str:
    ctx = decimal.Context(prec=digits, rounding=rounding)
    d = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    return format(d, "f") if abs(d.adjusted()) < 40 else format(d, "e")


def decimal_floor(x: mpf, digits: int = SERIAL_DIGITS) -> str:
    return _fmt(mpf_to_fraction(x), decimal.ROUND_FLOOR, digits)


def decimal_ceil(x: mpf, digits: int = SERIAL_DIGITS) -> str:
    return _fmt(mpf_to_fraction(x), decimal.ROUND_CEILING, digits)


@dataclass(frozen=True)
class ApproxInterval:
    """Closed real interval ``[lo, hi]`` known to contain an exact quantity."""

    lo: mpf
    hi: mpf

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def from_iv(cls, x: ivmpf) -> "ApproxInterval":
        return cls(lower(x), upper(x))

    @classmethod
    def exact(cls, value: Number) -> "ApproxInterval":
        return cls.from_iv(enclose(value))

    @classmethod
    def hull(cls, *items: "ApproxInterval") -> "ApproxInterval":
        return cls(min(i.lo for i in items), max(i.hi for i in items))

    def to_iv(self) -> ivmpf:
        return iv.mpf([self.lo, self.hi])

    @property
    def width(self) -> mpf:
        return self.hi - self.lo

    @property
    def mid(self) -> mpf:
        return (self.lo + self.hi) / 2

    def relative_width(self) -> mpf:
        scale = max(abs(self.lo), abs(self.hi))
        return self.width / scale if scale else self.width

    def contains(self, value: Number) -> bool:
        """Exact membership test (no rounding on either side)."""
        if isinstance(value, ApproxInterval):
            return self.contains(value.lo) and self.contains(value.hi)
        if isinstance(value, mpf):
            q = mpf_to_fraction(value)
        elif isinstance(value, float):
            q = Fraction(value)
        else:
            q = Fraction(value)
        return mpf_to_fraction(self.lo) <= q <= mpf_to_fraction(self.hi)

    def intersects(self, other: "ApproxInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def certainly_gt(self, other: Union["ApproxInterval", Number]) -> bool:
        other = _as_interval(other)
        return self.lo > other.hi

    def certainly_lt(self, other: Union["ApproxInterval", Number]) -> bool:
        other = _as_interval(other)
        return self.hi < other.lo

    def __add__(self, other):
        return ApproxInterval.from_iv(self.to_iv() + _as_interval(other).to_iv())

    __radd__ = __add__

    def __sub__(self, other):
        return ApproxInterval.from_iv(self.to_iv() - _as_interval(other).to_iv())

    def __rsub__(self, other):
        return ApproxInterval.from_iv(_as_interval(other).to_iv() - self.to_iv())

    def __mul__(self, other):
        return ApproxInterval.from_iv(self.to_iv() * _as_interval(other).to_iv())

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ApproxInterval.from_iv(self.to_iv() / _as_interval(other).to_iv())

    def __neg__(self):
        return ApproxInterval(-self.hi, -self.lo)

    def log(self) -> "ApproxInterval":
        return ApproxInterval.from_iv(iv.log(self.to_iv()))

    def exp(self) -> "ApproxInterval":
        return ApproxInterval.from_iv(iv.exp(self.to_iv()))

    def to_json(self, digits: int = SERIAL_DIGITS) -> dict:
        return {"lo": decimal_floor(self.lo, digits), "hi": decimal_ceil(self.hi, digits)}

    def __str__(self) -> str:
        return f"[{decimal_floor(self.lo, 20)}, {decimal_ceil(self.hi, 20)}]"


def _as_interval(x) -> ApproxInterval:
    if isinstance(x, ApproxInterval):
        return x
    if isinstance(x, ivmpf):
        return ApproxInterval.from_iv(x)
    return ApproxInterval.exact(x)


def complex_abs(z: ivmpc) -> ApproxInterval:
    """Enclosure of |z| over a rectangular complex interval."""
    return ApproxInterval.from_iv(abs(z))


def complex_point(re: mpf, im: mpf = mpf(0)) -> ivmpc:
    return iv.mpc(iv.mpf(re), iv.mpf(im))
