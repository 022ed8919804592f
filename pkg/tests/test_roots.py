from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from mahler_bound.poly import IntPolynomial, parse_polynomial, poly_gcd
from mahler_bound.roots import roots
from oracles import numeric_roots


def _inside(disk, z) -> bool:
    """z may be a zero-argument callable, evaluated at the working precision."""
    with mp.workprec(520):
        z = z() if callable(z) else z
        return abs(disk.center - z) <= disk.radius + mpf(2) ** -300


def test_golden_ratio_roots_isolated():
    rs = roots(parse_polynomial("x^2-x-1"), 128)
    assert len(rs.isolated()) == 2
    assert max(rs.max_radius(), mpf(0)) < mpf(2) ** -100
    assert any(_inside(d, lambda: (1 + mp.sqrt(5)) / 2) for d in rs.disks)


def test_zero_roots_are_exact():
    rs = roots(parse_polynomial("x^4-2x^2"), 96)
    zeros = [d for d in rs.disks if d.radius == 0 and d.center == 0]
    assert len(zeros) == 2


def test_linear_root_is_certified():
    rs = roots(IntPolynomial([1, 3]), 96)  # 3x + 1
    (d,) = rs.disks
    assert _inside(d, lambda: mpf(-1) / 3)


def test_double_root_forms_one_cluster():
    rs = roots(parse_polynomial("4x^2-4x+1"), 96)
    assert len(rs) == 2
    assert len(rs.clusters) == 1
    assert all(m.contains(mpf(1) / 2) for m in rs.root_moduli())


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-8, 8), min_size=2, max_size=8).filter(lambda c: c[-1] != 0 and c[0] != 0))
def test_every_oracle_root_lies_in_some_disk(c):
    f = IntPolynomial(c)
    if poly_gcd(f, IntPolynomial(f.derivative())).degree > 0:
        return  # the oracle is unreliable for repeated roots
    rs = roots(f, 128)
    assert len(rs) == f.degree
    # each cluster of k disks must hold exactly k oracle roots
    oracle = list(numeric_roots(c, 150))
    for cluster in rs.clusters:
        held = [z for z in oracle if any(_inside(rs.disks[i], z) for i in cluster)]
        assert len(held) == len(cluster)
