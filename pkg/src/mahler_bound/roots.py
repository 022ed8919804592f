"""Certified complex root enclosures.

Approximations come from Aberth-Ehrlich simultaneous iteration in mpmath
(seeded from numpy's companion-matrix roots).  They are then certified a
posteriori: with Weierstrass corrections

    W_i = f(z_i) / (a_d * prod_{j != i} (z_i - z_j)),

the roots of f are the eigenvalues of diag(z) - W 1^T, so by Gerschgorin
the disks D(z_i - W_i, (d-1)|W_i|) cover every root and each connected
component of k disks holds exactly k roots.  The W_i are evaluated in
outward-rounded complex interval arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
from mpmath import iv, mp, mpc, mpf

from .interval import ApproxInterval, lower, mpf_to_fraction, precision, upper
from .poly import IntPolynomial


class RootFindingError(RuntimeError):
    """Aberth iteration did not converge at the requested precision."""


@dataclass(frozen=True)
class Disk:
    center: mpc
    radius: mpf

    def modulus(self) -> ApproxInterval:
        """Enclosure of |z| for z in the disk."""
        a = abs(iv.mpc(iv.mpf(self.center.real), iv.mpf(self.center.imag)))
        r = iv.mpf(self.radius)
        lo = lower(a - r)
        return ApproxInterval(lo if lo > 0 else mpf(0), upper(a + r))

    def rectangle(self):
        """Axis-aligned complex interval containing the disk."""
        r = iv.mpf(self.radius)
        re = iv.mpf(self.center.real) + iv.mpf([-upper(r), upper(r)])
        im = iv.mpf(self.center.imag) + iv.mpf([-upper(r), upper(r)])
        return iv.mpc(re, im)


@dataclass(frozen=True)
class RootSet:
    """Disk enclosures of all roots, grouped into clusters.

    ``clusters[c]`` lists the indices of disks forming one connected
    component; a component of k disks contains exactly k roots counted with
    multiplicity.  Singleton clusters are isolated, certified simple roots.
    """

    disks: Tuple[Disk, ...]
    clusters: Tuple[Tuple[int, ...], ...]
    source_degree: int
    precision_bits: int

    def __len__(self) -> int:
        return len(self.disks)

    def centers(self) -> List[mpc]:
        return [d.center for d in self.disks]

    def max_radius(self) -> mpf:
        return max((d.radius for d in self.disks), default=mpf(0))

    def cluster_of(self, index: int) -> Tuple[int, ...]:
        for c in self.clusters:
            if index in c:
                return c
        raise IndexError(index)

    def isolated(self) -> List[int]:
        return [c[0] for c in self.clusters if len(c) == 1]

    def root_moduli(self) -> List[ApproxInterval]:
        """Per-root modulus enclosures; cluster members share the cluster hull."""
        out: List[ApproxInterval] = [None] * len(self.disks)  # type: ignore[list-item]
        for c in self.clusters:
            mods = [self.disks[i].modulus() for i in c]
            h = ApproxInterval.hull(*mods)
            for i in c:
                out[i] = mods[0] if len(c) == 1 else h
        return out


def _cauchy_radius(coeffs: Sequence[int]) -> float:
    lead = abs(coeffs[-1])
    return 1.0 + max(abs(c) for c in coeffs[:-1]) / lead


def _initial_guesses(f: IntPolynomial) -> List[complex]:
    d = f.degree
    try:
        with np.errstate(all="ignore"):
            z = np.roots([float(c) for c in reversed(f.coeffs)])
        z = [complex(w) for w in z]
        if len(z) != d or not all(cmath.isfinite(w) for w in z):
            raise ValueError
    except (ValueError, OverflowError, np.linalg.LinAlgError):
        r = _cauchy_radius(f.coeffs)
        z = [r * cmath.exp(2j * math.pi * (k + 0.25) / d) for k in range(d)]
    # separate duplicates so the Aberth repulsion term stays finite
    out: List[complex] = []
    for k, w in enumerate(z):
        while any(abs(w - v) < 1e-12 * max(1.0, abs(w)) for v in out):
            w += 1e-6 * cmath.exp(1j * (k + 1))
        out.append(w)
    return out


def _aberth(f: IntPolynomial, bits: int, max_iter: int) -> List[mpc]:
    coeffs = [mpf(c) for c in f.coeffs]
    dcoeffs = [mpf(i * c) for i, c in enumerate(f.coeffs)][1:]
    d = f.degree
    z = [mpc(w) for w in _initial_guesses(f)]
    tol = mpf(2) ** (-bits)
    best = mpf("inf")
    stalled = 0
    for _ in range(max_iter):
        worst = mpf(0)
        for i in range(d):
            zi = z[i]
            p = coeffs[-1]
            for c in coeffs[-2::-1]:
                p = p * zi + c
            if p == 0:
                continue
            dp = dcoeffs[-1]
            for c in dcoeffs[-2::-1]:
                dp = dp * zi + c
            ratio = p / dp if dp != 0 else mpc(tol)
            rep = mpc(0)
            for j in range(d):
                if j != i:
                    diff = zi - z[j]
                    if diff != 0:
                        rep += 1 / diff
            denom = 1 - ratio * rep
            step = ratio / denom if denom != 0 else ratio
            if not _finite(step):
                # collision with a neighbour at a multiple root: nudge instead
                step = tol ** 0.5 * mpc(mp.cos(i + 1), mp.sin(i + 1)) * max(mpf(1), abs(zi))
            z[i] = zi - step
            rel = abs(step) / max(mpf(1), abs(z[i]))
            if rel > worst:
                worst = rel
        if not all(_finite(w) for w in z):
            raise RootFindingError(f"Aberth iteration diverged at {bits} bits")
        if worst < tol:
            return _separate(z, tol)
        # clustered roots converge linearly and then stall at roughly
        # bits/multiplicity; certification copes with the wider disks
        if worst < best / 2:
            best = worst
            stalled = 0
        else:
            stalled += 1
            if stalled >= 12:
                return _separate(z, tol)
    return _separate(z, tol)


def _finite(w: mpc) -> bool:
    return bool(mp.isfinite(w.real) and mp.isfinite(w.imag))


def _separate(z: List[mpc], tol: mpf) -> List[mpc]:
    """Make approximations pairwise distinct so the corrections are defined."""
    out: List[mpc] = []
    for k, w in enumerate(z):
        while any(w == v for v in out):
            w = w + tol * mpc(mp.cos(k + 1), mp.sin(k + 1)) * max(mpf(1), abs(w))
        out.append(w)
    return out


def _iv_point(z: mpc):
    return iv.mpc(iv.mpf(z.real), iv.mpf(z.imag))


def _certify(f: IntPolynomial, z: List[mpc]) -> List[Disk]:
    d = f.degree
    pts = [_iv_point(w) for w in z]
    lead = iv.mpf(f.leading)
    disks = []
    for i in range(d):
        num = f(pts[i])
        den = lead
        for j in range(d):
            if j != i:
                den = den * (pts[i] - pts[j])
        if lower(abs(den)) <= 0:
            # correction undefined: fall back to a disk that is merged with all others
            disks.append(Disk(z[i], mpf("inf")))
            continue
        W = num / den
        center_iv = pts[i] - W
        cre = upper(center_iv.real.mid)
        cim = upper(center_iv.imag.mid)
        center = mpc(cre, cim)
        # (d-1)|W| plus the offset of the stored center from the interval center
        off = abs(center_iv - _iv_point(center))
        radius = upper(iv.mpf(d - 1) * abs(W) + off)
        disks.append(Disk(center, radius))
    return disks


def _components(disks: List[Disk]) -> Tuple[Tuple[int, ...], ...]:
    n = len(disks)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    rects = [_iv_point(dk.center) for dk in disks]
    for i in range(n):
        for j in range(i + 1, n):
            dist = abs(rects[i] - rects[j])
            if mp.isinf(disks[i].radius) or mp.isinf(disks[j].radius):
                parent[find(i)] = find(j)
                continue
            reach = iv.mpf(disks[i].radius) + iv.mpf(disks[j].radius)
            # disjoint only when certified: dist.lo > reach.hi
            if not lower(dist) > upper(reach):
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(g) for g in sorted(groups.values()))


def roots(f: IntPolynomial, precision_bits: int = 256, max_iter: int = 400) -> RootSet:
    """Certified disk enclosures of the roots of f.

    Raises RootFindingError when the iteration fails to converge; callers
    retry at a higher precision.
    """
    if precision_bits < 53:
        raise ValueError("precision_bits must be >= 53")
    d = f.degree
    if d == 0:
        return RootSet((), (), 0, precision_bits)
    zero_mult, g = f.strip_x()
    disks: List[Disk] = [Disk(mpc(0), mpf(0)) for _ in range(zero_mult)]
    work = precision_bits + 16
    with mp.workprec(work), precision(work):
        if g.degree == 1:
            exact = Fraction(-g.coeffs[0], g.coeffs[1])
            c = mpc(mpf(exact.numerator) / exact.denominator)
            err = abs(mpf_to_fraction(c.real) - exact)
            radius = iv.mpf(err.numerator) / err.denominator if err else iv.mpf(0)
            disks.append(Disk(c, upper(radius)))
        elif g.degree >= 2:
            z = _aberth(g, precision_bits, max_iter)
            disks.extend(_certify(g, z))
    comps = _components(disks)
    return RootSet(tuple(disks), comps, d, precision_bits)
