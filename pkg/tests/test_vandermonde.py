from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import iv, mp

from mahler_bound.interval import ApproxInterval, mpf_to_fraction, precision
from mahler_bound.measure import mahler_measure
from mahler_bound.poly import IntPolynomial, NotMonicError, discriminant, parse_polynomial
from mahler_bound.primes import build_prime_table
from mahler_bound.vandermonde import (
    ConfluentSpec,
    HeightMatrixSpec,
    build_confluent_matrix,
    closed_form_exact,
    decompose_v_squared,
    det_abs,
    det_closed_form,
    det_direct,
    factorial_block,
    fermat_divisibility_check,
    fermat_product,
    hadamard_upper_bound_log,
    lower_bound_log,
)
from oracles import sylvester_resultant

TABLE = build_prime_table(10)
GOLDEN = parse_polynomial("x^2-x-1")
LEHMER = parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")


@st.composite
def rational_specs(draw, max_n=8):
    mult = draw(st.lists(st.integers(1, 3), min_size=1, max_size=4).filter(lambda m: sum(m) <= max_n))
    nodes = draw(
        st.lists(
            st.fractions(min_value=-6, max_value=6, max_denominator=4),
            min_size=len(mult),
            max_size=len(mult),
            unique=True,
        )
    )
    return ConfluentSpec(tuple(nodes), tuple(mult))


@settings(max_examples=80, deadline=None)
@given(rational_specs())
def test_closed_form_matches_sympy_determinant(spec):
    mat = build_confluent_matrix(spec)
    oracle = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in mat]).det()
    assert abs(Fraction(int(sympy.numer(oracle)), int(sympy.denom(oracle)))) == abs(closed_form_exact(spec))
    assert det_direct(mat) == Fraction(int(sympy.numer(oracle)), int(sympy.denom(oracle)))


def test_matrix_entries_are_derivative_columns():
    spec = ConfluentSpec((Fraction(2),), (3,))
    mat = build_confluent_matrix(spec)
    # columns: x^l, l x^(l-1), C(l,2) x^(l-2) at x=2
    assert [row[0] for row in mat] == [1, 2, 4]
    assert [row[1] for row in mat] == [0, 1, 4]
    assert [row[2] for row in mat] == [0, 0, 1]


def test_repeated_node_gives_zero():
    spec = ConfluentSpec((Fraction(1), Fraction(1)), (1, 1))
    assert det_direct(build_confluent_matrix(spec)) == 0


def test_complex_nodes_enclose_closed_form():
    rng = random.Random(3)
    for _ in range(25):
        nodes = [iv.mpc(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(rng.randint(1, 4))]
        mult = tuple(rng.randint(1, 3) for _ in nodes)
        spec = ConfluentSpec(tuple(nodes), mult)
        with precision(160):
            direct = det_abs(build_confluent_matrix(spec))
            closed = det_closed_form(spec)
        assert direct.intersects(closed)


def test_golden_ratio_example():
    dec = decompose_v_squared(HeightMatrixSpec(GOLDEN, 1, 1), TABLE)
    assert (dec.A1, dec.A2, dec.A3, dec.A4, dec.V2) == (5, 16, 5, 1, 400)
    cs = HeightMatrixSpec(GOLDEN, 1, 1).confluent_spec(TABLE, 160)
    with precision(176):
        assert det_abs(build_confluent_matrix(cs)).contains(20)
    assert decompose_v_squared(HeightMatrixSpec(GOLDEN, 2, 2), TABLE).V2 == 3564000**2


@pytest.mark.parametrize("f", ["x^2-x-1", "x^3-x-1", "x^3+2x^2-x+3", "x^2+3"])
@pytest.mark.parametrize("k,s", [(1, 0), (1, 2), (2, 1), (2, 3)])
def test_decomposition_structure(f, k, s):
    f = parse_polynomial(f)
    dec = decompose_v_squared(HeightMatrixSpec(f, k, s), TABLE)
    assert dec.A1 == discriminant(f) ** (k * k)
    assert dec.V2 == dec.A1 * dec.A2 * dec.A3 * dec.A4
    # each resultant is divisible by p^d, so the primes' product^(2dk) divides A2
    assert dec.A2 % math.prod(TABLE.primes[:s]) ** (2 * f.degree * k) == 0


@pytest.mark.parametrize("f", ["x^2-x-1", "x^3-x-1", "x^2+3"])
def test_hadamard_sandwich(f):
    f = parse_polynomial(f)
    for k, s in [(1, 0), (1, 1), (2, 2)]:
        spec = HeightMatrixSpec(f, k, s)
        dec = decompose_v_squared(spec, TABLE)
        upper_log = hadamard_upper_bound_log(spec, mahler_measure(f).log_measure, TABLE)
        with mp.workprec(200):
            assert mp.log(abs(dec.V2)) <= upper_log.hi


def test_hadamard_collapse_for_k1_s0():
    lm = mahler_measure(GOLDEN).log_measure
    got = hadamard_upper_bound_log(HeightMatrixSpec(GOLDEN, 1, 0), lm, TABLE)
    with precision(96):
        expected = ApproxInterval.from_iv(2 * iv.log(2) + 4 * lm.to_iv())
    assert got.intersects(expected)


def test_lehmer_lower_below_upper():
    spec = HeightMatrixSpec(LEHMER, 2, 3)
    lo = lower_bound_log(spec, TABLE)
    hi = hadamard_upper_bound_log(spec, mahler_measure(LEHMER).log_measure, TABLE)
    assert lo.certainly_lt(hi)


def test_lower_bound_formula_small_case():
    # d=2, k=1, s=1: 2dk log 2 + d(k^2+s) (3.108 - 8.6 d^(-2/3)) = 4 log 2 + 4 (...)
    with mp.workprec(120):
        expected = 4 * mp.log(2) + 4 * (mp.mpf("3.108") - mp.mpf("8.6") * mp.mpf(2) ** (mp.mpf(-2) / 3))
    got = lower_bound_log(HeightMatrixSpec(GOLDEN, 1, 1), TABLE)
    assert got.lo <= expected <= got.hi
    assert mpf_to_fraction(got.hi) < 0


def test_factorial_block():
    assert factorial_block(1) == 1
    assert factorial_block(2) == 3
    assert factorial_block(3) == 3 * 5 * 4


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_fermat_product_matches_sylvester(c, p):
    f = IntPolynomial(c + [1])
    fp = fermat_product(f, p)
    assert fp == sylvester_resultant(f.coeffs, f.compose_power(p).coeffs)
    assert fermat_divisibility_check(f, p)
    assert fp % p**f.degree == 0


def test_fermat_examples():
    assert sylvester_resultant(GOLDEN.coeffs, GOLDEN.compose_power(3).coeffs) == -9
    assert fermat_product(GOLDEN, 3) == -9
    assert fermat_product(parse_polynomial("x-2"), 5) == 30


def test_matrix_spec_validation():
    with pytest.raises(NotMonicError):
        HeightMatrixSpec(parse_polynomial("2x^2-1"), 1, 1)
    with pytest.raises(ValueError):
        HeightMatrixSpec(parse_polynomial("x-1"), 1, 1)
    with pytest.raises(ValueError):
        ConfluentSpec((Fraction(1),), (0,))
