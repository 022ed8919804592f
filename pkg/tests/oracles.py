"""Independent reference computations used only by the tests."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from mpmath import mp, mpf, polyroots


def sylvester_matrix(a: Sequence[int], b: Sequence[int]) -> List[List[int]]:
    """Sylvester matrix of two ascending coefficient lists."""
    m, n = len(a) - 1, len(b) - 1
    ra, rb = list(reversed(a)), list(reversed(b))
    rows = [[0] * i + ra + [0] * (n - 1 - i) for i in range(n)]
    rows += [[0] * i + rb + [0] * (m - 1 - i) for i in range(m)]
    return rows


def bareiss_det(mat: List[List[int]]) -> int:
    """Fraction-free integer determinant."""
    a = [row[:] for row in mat]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def sylvester_resultant(a: Sequence[int], b: Sequence[int]) -> int:
    return bareiss_det(sylvester_matrix(a, b))


def numeric_roots(coeffs: Sequence[int], dps: int = 60):
    """Roots of an ascending integer coefficient list via mpmath."""
    with mp.workdps(dps):
        return polyroots(list(reversed(coeffs)), maxsteps=500, extraprec=4 * dps)


def numeric_measure(coeffs: Sequence[int], dps: int = 60) -> mpf:
    with mp.workdps(dps):
        out = abs(mpf(coeffs[-1]))
        for r in numeric_roots(coeffs, dps):
            out *= max(mpf(1), abs(r))
        return out


def near(a, b: Fraction, tol: Fraction) -> bool:
    return abs(Fraction(str(a)) - b) <= tol
