"""Confluent Vandermonde determinants and the exact integers behind them.

Column ``(j, i)`` of the matrix is v_i(beta_j), whose row-l entry is
C(l, i) * beta_j^(l - i) (zero for l < i), for 0 <= i < r_j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from mpmath import iv, mpf
from mpmath.ctx_iv import ivmpc

from .interval import ApproxInterval, enclose, lower, precision, upper
from .poly import IntPolynomial, NotMonicError, discriminant, power_map, resultant
from .primes import PrimeTable
from .roots import roots

Exact = Union[int, Fraction]

LOG_DISC_CONST = Fraction("3.108")
LOG_DISC_CORR = Fraction("8.6")


class EnclosureBlowupError(ArithmeticError):
    def __init__(self, message: str, width):
        super().__init__(message)
        self.width = width


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _as_ivc(x) -> ivmpc:
    if isinstance(x, ivmpc):
        return x
    if _is_exact(x):
        return iv.mpc(enclose(Fraction(x)), 0)
    if isinstance(x, complex):
        return iv.mpc(iv.mpf(x.real), iv.mpf(x.imag))
    return iv.mpc(x)


@dataclass(frozen=True)
class ConfluentSpec:
    """Nodes ``betas`` (exact rationals or complex enclosures) with multiplicities."""

    betas: Tuple
    multiplicities: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.betas) != len(self.multiplicities):
            raise ValueError("betas and multiplicities differ in length")
        if any(r < 1 for r in self.multiplicities):
            raise ValueError("multiplicities must be positive")
        if self.n < 1:
            raise ValueError("empty specification")

    @property
    def n(self) -> int:
        return sum(self.multiplicities)

    @property
    def m(self) -> int:
        return len(self.betas)

    @property
    def exact(self) -> bool:
        return all(_is_exact(b) for b in self.betas)


@dataclass(frozen=True)
class HeightMatrixSpec:
    """Nodes alpha_i (multiplicity k) followed by alpha_i^p_l for the first s primes."""

    f: IntPolynomial
    k: int
    s: int

    def __post_init__(self) -> None:
        if not self.f.is_monic():
            raise NotMonicError("f must be monic")
        if self.f.degree < 2:
            raise ValueError("degree must be >= 2")
        if self.k < 1 or self.s < 0:
            raise ValueError("need k >= 1 and s >= 0")

    @property
    def d(self) -> int:
        return self.f.degree

    @property
    def m(self) -> int:
        return (self.s + 1) * self.d

    @property
    def n(self) -> int:
        return self.d * (self.k + self.s)

    def confluent_spec(self, table: PrimeTable, precision_bits: int = 128) -> ConfluentSpec:
        """Build (beta, r) from certified root enclosures."""
        table.require(self.s)
        rs = roots(self.f, precision_bits)
        if len(rs.isolated()) != self.d:
            raise ArithmeticError("roots of f are not separated at this precision")
        with precision(precision_bits + 16):
            base = [dk.rectangle() for dk in rs.disks]
            betas: List = list(base)
            for p in table.primes[: self.s]:
                betas.extend(b**p for b in base)
        mult = (self.k,) * self.d + (1,) * (self.s * self.d)
        return ConfluentSpec(tuple(betas), mult)


def build_confluent_matrix(spec: ConfluentSpec) -> List[List]:
    """Row-major n x n matrix; Fraction entries for exact specs, iv.mpc otherwise."""
    n = spec.n
    exact = spec.exact
    cols = []
    for beta, r in zip(spec.betas, spec.multiplicities):
        b = Fraction(beta) if exact else _as_ivc(beta)
        powers = [Fraction(1) if exact else iv.mpc(1)]
        for _ in range(n - 1):
            powers.append(powers[-1] * b)
        for i in range(r):
            zero = Fraction(0) if exact else iv.mpc(0)
            cols.append([math.comb(l, i) * powers[l - i] if l >= i else zero for l in range(n)])
    return [[cols[c][row] for c in range(n)] for row in range(n)]


def _det_exact(mat: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(map(Fraction, row)) for row in mat]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                factor = a[r][c] * inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[c])]
    return det


def _mid_abs(z: ivmpc) -> mpf:
    re, im = z.real, z.imag
    return abs(mpf(re.mid)) + abs(mpf(im.mid))


def _hadamard(block: List[List[ivmpc]]) -> mpf:
    """Upper bound for |det| of a square interval block (product of column norms)."""
    if not block:
        return mpf(1)
    n = len(block)
    bound = iv.mpf(1)
    for c in range(n):
        sq = iv.mpf(0)
        for r in range(n):
            sq = sq + abs(block[r][c]) ** 2
        bound = bound * iv.sqrt(sq)
    return upper(bound)


def det_direct(matrix: Sequence[Sequence]) -> Union[Fraction, ivmpc]:
    """Determinant by elimination: exact for rational entries, enclosure otherwise.

    Interval elimination uses full pivoting on midpoint magnitudes.  When no
    usable pivot excludes zero, the remaining block is bounded by Hadamard's
    inequality and a zero-centred enclosure is returned.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if all(_is_exact(x) for row in matrix for x in row):
        return _det_exact(matrix)
    a = [[_as_ivc(x) for x in row] for row in matrix]
    det = iv.mpc(1)
    for c in range(n):
        best = None
        for r in range(c, n):
            for q in range(c, n):
                mag = _mid_abs(a[r][q])
                if best is None or mag > best[0]:
                    best = (mag, r, q)
        _, pr, pc = best
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            det = -det
        if pc != c:
            for row in a:
                row[c], row[pc] = row[pc], row[c]
            det = -det
        pivot = a[c][c]
        if not lower(abs(pivot)) > 0:
            rest = [row[c:] for row in a[c:]]
            R = upper(abs(det)) * _hadamard(rest)
            box = iv.mpf([-R, R])
            return iv.mpc(box, box)
        det = det * pivot
        for r in range(c + 1, n):
            factor = a[r][c] / pivot
            a[r] = a[r][:c] + [iv.mpc(0)] + [x - factor * y for x, y in zip(a[r][c + 1 :], a[c][c + 1 :])]
    return det


def det_abs(matrix: Sequence[Sequence]) -> ApproxInterval:
    """Enclosure of |det|."""
    d = det_direct(matrix)
    if isinstance(d, Fraction):
        return ApproxInterval.exact(abs(d))
    a = abs(d)
    return ApproxInterval(max(lower(a), mpf(0)), upper(a))


def closed_form_exact(spec: ConfluentSpec) -> Fraction:
    """prod_{i<j} (beta_i - beta_j)^(r_i r_j) for rational nodes (signed)."""
    if not spec.exact:
        raise TypeError("closed_form_exact needs rational nodes")
    out = Fraction(1)
    b, r = spec.betas, spec.multiplicities
    for i in range(len(b)):
        for j in range(i + 1, len(b)):
            out *= (Fraction(b[i]) - Fraction(b[j])) ** (r[i] * r[j])
    return out


def det_closed_form(spec: ConfluentSpec) -> ApproxInterval:
    """Enclosure of |V| = prod_{i<j} |beta_i - beta_j|^(r_i r_j)."""
    if spec.exact:
        return ApproxInterval.exact(abs(closed_form_exact(spec)))
    b = [_as_ivc(x) for x in spec.betas]
    r = spec.multiplicities
    out = iv.mpf(1)
    for i in range(len(b)):
        for j in range(i + 1, len(b)):
            out = out * abs(b[i] - b[j]) ** (r[i] * r[j])
    return ApproxInterval(max(lower(out), mpf(0)), upper(out))


@dataclass(frozen=True)
class VDecomposition:
    A1: int
    A2: int
    A3: int
    A4: int
    V2: int
    degenerate: bool
    res_products: Tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {
            "A1": str(self.A1),
            "A2": str(self.A2),
            "A3": str(self.A3),
            "A4": str(self.A4),
            "V2": str(self.V2),
            "degenerate": self.degenerate,
        }


def fermat_product(f: IntPolynomial, p: int) -> int:
    """prod_i f(alpha_i^p) = prod_{i,j} (alpha_i^p - alpha_j), as an exact integer.

    Equals Res(f, f(X^p)) for monic f; computed as Res(f_p, f) with both of
    degree d rather than through the degree-dp polynomial f(X^p).
    """
    if not f.is_monic():
        raise NotMonicError("f must be monic")
    return resultant(power_map(f, p), f)


def decompose_v_squared(spec: HeightMatrixSpec, table: PrimeTable) -> VDecomposition:
    """Exact A1..A4 with V^2 = A1 A2 A3 A4."""
    f, k, s = spec.f, spec.k, spec.s
    table.require(s)
    ps = table.primes[:s]
    fp = [power_map(f, p) for p in ps]
    res = tuple(resultant(g, f) for g in fp)
    A1 = discriminant(f) ** (k * k)
    A2 = math.prod(res) ** (2 * k)
    A3 = math.prod(discriminant(g) for g in fp)
    cross = 1
    for a in range(s):
        for b in range(a + 1, s):
            cross *= resultant(fp[a], fp[b])
    A4 = cross * cross
    V2 = A1 * A2 * A3 * A4
    return VDecomposition(A1, A2, A3, A4, V2, V2 == 0, res)


def fermat_divisibility_check(f: IntPolynomial, p: int) -> bool:
    """Whether p^deg(f) divides prod_i f(alpha_i^p)."""
    return fermat_product(f, p) % p**f.degree == 0


def _log_disc_term(d: int):
    """3.108 - 8.6 d^(-2/3) as an interval."""
    return enclose(LOG_DISC_CONST) - enclose(LOG_DISC_CORR) * iv.exp(-iv.log(iv.mpf(d)) * 2 / 3)



def lower_bound_log(spec: HeightMatrixSpec, table: PrimeTable, bits: int = 96) -> ApproxInterval:
    """log of (p_1...p_s)^(2dk) exp((3.108 - 8.6 d^(-2/3)) d (k^2+s))."""
    d, k, s = spec.d, spec.k, spec.s
    table.require(s)
    with precision(bits):
        theta = table.theta(s).to_iv() if s else iv.mpf(0)
        val = 2 * d * k * theta + _log_disc_term(d) * (d * (k * k + s))
        return ApproxInterval.from_iv(val)


def factorial_block(k: int) -> int:
    """prod_{i<k} (2i+1)(i!)^2 as an exact integer."""
    return math.prod((2 * i + 1) * math.factorial(i) ** 2 for i in range(k))


def hadamard_upper_bound_log(
    spec: HeightMatrixSpec, log_measure: ApproxInterval, table: PrimeTable, bits: int = 96
) -> ApproxInterval:
    """log of (n^(k^2+s) / prod_{i<k}(2i+1)(i!)^2)^d M^(2n(k + p_1 + ... + p_s))."""
    d, k, s, n = spec.d, spec.k, spec.s, spec.n
    table.require(s)
    with precision(bits):
        head = (k * k + s) * iv.log(iv.mpf(n)) - iv.log(iv.mpf(factorial_block(k)))
        tail = 2 * n * (k + table.sum_first(s)) * log_measure.to_iv()
        return ApproxInterval.from_iv(d * head + tail)
