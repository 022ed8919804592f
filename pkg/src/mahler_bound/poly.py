"""Exact integer polynomials: parsing, resultants, power maps, predicates."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Iterable, List, Sequence, Tuple


class PolynomialError(ValueError):
    """Malformed or degenerate polynomial input."""


class ZeroPolynomialError(PolynomialError):
    pass


class NotMonicError(PolynomialError):
    pass


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients stored in ascending order.

    ``coeffs[i]`` is the coefficient of ``X**i``.  Trailing zeros (leading
    zeros in the usual written order) are stripped; the zero polynomial is
    rejected.
    """

    coeffs: Tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if not cs:
            raise ZeroPolynomialError("zero polynomial")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0]

    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial(_add(self.coeffs, other.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return IntPolynomial(_add(self.coeffs, [-c for c in other.coeffs]))

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        return IntPolynomial(_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPolynomial":
        out = IntPolynomial([1])
        for _ in range(e):
            out = out * self
        return out

    def derivative(self) -> List[int]:
        """Coefficients of f' (may be the empty list for constants)."""
        return [i * c for i, c in enumerate(self.coeffs)][1:]

    def reverse(self) -> "IntPolynomial":
        """X^d f(1/X); requires a nonzero constant term to keep the degree."""
        return IntPolynomial(reversed(self.coeffs))

    def negate_x(self) -> "IntPolynomial":
        """f(-X)."""
        return IntPolynomial(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def compose_power(self, m: int) -> "IntPolynomial":
        """f(X^m)."""
        out = [0] * (self.degree * m + 1)
        for i, c in enumerate(self.coeffs):
            out[i * m] = c
        return IntPolynomial(out)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def strip_x(self) -> Tuple[int, "IntPolynomial"]:
        """Split off the largest power of X: returns (k, g) with f = X^k g."""
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k, IntPolynomial(self.coeffs[k:])

    def divmod_exact(self, other: "IntPolynomial") -> Tuple["IntPolynomial", bool]:
        """Quotient by a monic (or unit-leading) divisor and whether it divides."""
        q, r = _divmod_unit(self.coeffs, other.coeffs)
        return (IntPolynomial(q) if q else None), not any(r)

    def to_text(self) -> str:
        return format_polynomial(self.coeffs)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)})"


def _add(a: Sequence[int], b: Sequence[int]) -> List[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _divmod_unit(a: Sequence[int], b: Sequence[int]) -> Tuple[List[int], List[int]]:
    lb = b[-1]
    if lb not in (1, -1):
        raise NotMonicError("divisor must have leading coefficient +-1")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], _trim(r)
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * lb
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
    return _trim(q), _trim(r[:db])


# ---------------------------------------------------------------------------
# parsing / formatting

_TERM = re.compile(r"([+-]?)(\d*)(\*?x(?:\^(\d+))?)?")


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse ``"-1,-1,0,1"`` (ascending) or ``"x^3-x-1"`` into a polynomial."""
    s = text.strip().replace("−", "-").replace(" ", "").replace("**", "^")
    s = s.replace("X", "x")
    if not s:
        raise PolynomialError("empty polynomial text")
    if "," in s or "x" not in s:
        try:
            coeffs = [int(tok) for tok in s.split(",")]
        except ValueError as exc:
            raise PolynomialError(f"bad coefficient list {text!r}") from exc
        return IntPolynomial(coeffs)
    coeffs: dict = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (pos > 0 and not m.group(1)):
            raise PolynomialError(f"syntax error in {text!r} at offset {pos}")
        sign, digits, xpart, exp = m.groups()
        if not digits and not xpart:
            raise PolynomialError(f"syntax error in {text!r} at offset {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        e = 0 if not xpart else (int(exp) if exp else 1)
        coeffs[e] = coeffs.get(e, 0) + c
        pos = m.end()
    out = [0] * (max(coeffs) + 1)
    for e, c in coeffs.items():
        out[e] = c
    return IntPolynomial(out)


def format_polynomial(coeffs: Sequence[int]) -> str:
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            body = ("" if a == 1 else str(a)) + ("x" if e == 1 else f"x^{e}")
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


# ---------------------------------------------------------------------------
# resultants


def _content(a: Sequence[int]) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
    return g


def _prem(a: List[int], b: List[int]) -> List[int]:
    """Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) * a mod b."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(r) - len(b) + 1
    while r and len(r) - 1 >= db:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for j in range(db + 1):
            r[shift + j] -= c * b[j]
        r.pop()
        _trim(r)
        e -= 1
    if e > 0:
        f = lb**e
        r = [x * f for x in r]
    return r


def resultant_coeffs(a: Sequence[int], b: Sequence[int]) -> int:
    """Subresultant-PRS resultant of two nonzero integer coefficient lists.

    Convention: Res(A, B) = lc(A)^deg(B) * prod over roots alpha of A of B(alpha).
    """
    A = _trim(list(a))
    B = _trim(list(b))
    if not A or not B:
        raise ZeroPolynomialError("resultant of zero polynomial")
    da, db = len(A) - 1, len(B) - 1
    if da == 0:
        return A[0] ** db
    if db == 0:
        return B[0] ** da
    ca, cb = _content(A), _content(B)
    if A[-1] < 0:
        ca = -ca
    if B[-1] < 0:
        cb = -cb
    A = [x // ca for x in A]
    B = [x // cb for x in B]
    t = ca**db * cb**da
    s = 1
    if da < db:
        A, B = B, A
        da, db = db, da
        if da % 2 and db % 2:
            s = -s
    g = h = 1
    while True:
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        R = _prem(A, B)
        if not R:
            return 0
        A = B
        den = g * h**delta
        B = [x // den for x in R]
        g = A[-1]
        # h <- h^(1-delta) g^delta, exact
        if delta == 0:
            pass
        else:
            h = g**delta // h ** (delta - 1)
        da, db = len(A) - 1, len(B) - 1
        if db == 0:
            lb = B[0]
            hh = lb**da // h ** (da - 1) if da >= 1 else 1
            return s * t * hh


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Exact resultant Res_X(f, g); for monic f this is the product of g over f's roots."""
    return resultant_coeffs(f.coeffs, g.coeffs)


def discriminant(f: IntPolynomial) -> int:
    """(-1)^(d(d-1)/2) Res(f, f') / lc(f); for monic f, prod_{i<j} (a_i - a_j)^2."""
    d = f.degree
    if d < 1:
        raise PolynomialError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    r = resultant_coeffs(f.coeffs, f.derivative())
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, f.leading)
    assert rem == 0
    return q


# ---------------------------------------------------------------------------
# power map


def _interpolate_monic(values: Sequence[int], degree: int) -> IntPolynomial:
    """Newton interpolation through x = 0..degree; result must be integral."""
    n = degree + 1
    table = [Fraction(v) for v in values[:n]]
    newton = [table[0]]
    for level in range(1, n):
        table = [(table[i + 1] - table[i]) / level for i in range(len(table) - 1)]
        newton.append(table[0])
    # expand sum newton[j] * prod_{i<j}(x - i)
    poly = [Fraction(0)] * n
    basis = [Fraction(1)]
    for j in range(n):
        for i, c in enumerate(basis):
            poly[i] += newton[j] * c
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, c in enumerate(basis):
            nxt[i + 1] += c
            nxt[i] -= j * c
        basis = nxt
    out = []
    for c in poly:
        if c.denominator != 1:
            raise ArithmeticError("power map interpolation produced non-integer coefficient")
        out.append(int(c))
    return IntPolynomial(out)


def power_map(f: IntPolynomial, m: int) -> IntPolynomial:
    """f_m(X) = prod_j (X - alpha_j^m) for monic f.

    Each value f_m(x0) = Res_Y(f(Y), x0 - Y^m) is an exact resultant; the
    monic degree-d polynomial is recovered by interpolating d+1 of them.
    """
    if m < 1:
        raise ValueError("power must be a positive integer")
    if not f.is_monic():
        raise NotMonicError("power_map requires a monic polynomial")
    if m == 1 or f.degree == 0:
        return f
    d = f.degree
    values = []
    for x0 in range(d + 1):
        g = [0] * (m + 1)
        g[0] = x0
        g[m] = -1
        values.append(resultant_coeffs(f.coeffs, g))
    out = _interpolate_monic(values, d)
    assert out.is_monic() and out.degree == d
    return out


# ---------------------------------------------------------------------------
# predicates


def is_reciprocal(f: IntPolynomial) -> bool:
    """True iff X^d f(1/X) = +-f(X)."""
    if f.constant == 0:
        raise PolynomialError("is_reciprocal requires a nonzero constant term")
    rev = f.coeffs[::-1]
    return rev == f.coeffs or all(a == -b for a, b in zip(rev, f.coeffs))


ROOT_OF_UNITY_MAX_ITER = 64


def is_root_of_unity_product(f: IntPolynomial) -> bool:
    """True iff every root of the monic f is a root of unity.

    Iterates the squaring power map and looks for a repeated polynomial.  A
    coefficient exceeding the binomial bound C(d, i) proves some root lies off
    the unit circle, which ends the iteration early with ``False``.
    """
    if not f.is_monic():
        raise NotMonicError("root-of-unity test requires a monic polynomial")
    if f.constant == 0:
        raise PolynomialError("root-of-unity test requires a nonzero constant term")
    d = f.degree
    if d == 0:
        return True
    if abs(f.constant) != 1:
        return False
    seen = set()
    g = f
    for _ in range(ROOT_OF_UNITY_MAX_ITER):
        if any(abs(c) > comb(d, i) for i, c in enumerate(g.coeffs)):
            return False
        if g.coeffs in seen:
            return True
        seen.add(g.coeffs)
        g = power_map(g, 2)
    raise RuntimeError("power-map orbit did not close within the iteration cap")


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPolynomial:
    """n-th cyclotomic polynomial, by dividing X^n - 1 by Phi_e for e | n, e < n."""
    if n < 1:
        raise ValueError("n must be positive")
    num = IntPolynomial([-1] + [0] * (n - 1) + [1])
    for e in range(1, n):
        if n % e == 0:
            q, ok = num.divmod_exact(cyclotomic(e))
            assert ok
            num = q
    return num


def _totient(n: int) -> int:
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


def cyclotomic_indices_up_to_degree(d: int) -> List[int]:
    """All n with phi(n) <= d (phi(n) >= sqrt(n/2) bounds the search)."""
    limit = 2 * d * d + 2
    return [n for n in range(1, limit + 1) if _totient(n) <= d]


def split_cyclotomic(f: IntPolynomial) -> Tuple[List[Tuple[int, int]], IntPolynomial]:
    """Divide out every cyclotomic factor of f exactly.

    Returns ``([(n, multiplicity), ...], cofactor)`` with
    f = cofactor * prod Phi_n^multiplicity.  The cofactor has no root of unity
    among its roots.
    """
    found = []
    g = f
    for n in cyclotomic_indices_up_to_degree(f.degree):
        phi = cyclotomic(n)
        mult = 0
        while g.degree >= phi.degree:
            q, ok = g.divmod_exact(phi)
            if not ok:
                break
            g = q
            mult += 1
        if mult:
            found.append((n, mult))
    return found, g


# ---------------------------------------------------------------------------
# gcd and squarefree decomposition over Z[x]


def primitive_part(f: IntPolynomial) -> Tuple[int, IntPolynomial]:
    """(content, primitive part) with the primitive part's leading coefficient positive."""
    c = f.content()
    if f.leading < 0:
        c = -c
    return c, IntPolynomial(x // c for x in f.coeffs)


def exact_quotient(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """a / b in Z[x]; raises ArithmeticError when b does not divide a."""
    r = list(a.coeffs)
    db = b.degree
    lb = b.leading
    if a.degree < db:
        raise ArithmeticError("divisor has larger degree")
    q = [0] * (a.degree - db + 1)
    for i in range(a.degree, db - 1, -1):
        c, rem = divmod(r[i], lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        q[i - db] = c
        if c:
            for j in range(db + 1):
                r[i - db + j] -= c * b.coeffs[j]
    if any(r[:db]):
        raise ArithmeticError("inexact polynomial division")
    return IntPolynomial(q)


def poly_gcd(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    """Primitive gcd with positive leading coefficient (primitive PRS)."""
    _, a = primitive_part(f)
    _, b = primitive_part(g)
    if a.degree < b.degree:
        a, b = b, a
    while True:
        r = _prem(list(a.coeffs), list(b.coeffs))
        if not r:
            return b
        rp = IntPolynomial(r)
        if rp.degree == 0:
            return IntPolynomial([1])
        a, b = b, primitive_part(rp)[1]


def squarefree_decomposition(f: IntPolynomial) -> Tuple[int, List[Tuple[IntPolynomial, int]]]:
    """f = content * prod g_i^i with each g_i squarefree, primitive, pairwise coprime."""
    content, p = primitive_part(f)
    if p.degree == 0:
        return content * p.leading, []
    out: List[Tuple[IntPolynomial, int]] = []
    a = poly_gcd(p, IntPolynomial(p.derivative()))
    b = exact_quotient(p, a)
    i = 1
    while b.degree > 0:
        c = poly_gcd(a, b)
        part = exact_quotient(b, c)
        if part.degree > 0:
            out.append((part, i))
        b = c
        a = exact_quotient(a, c)
        i += 1
    return content, out
