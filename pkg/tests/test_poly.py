from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mahler_bound.poly import (
    IntPolynomial,
    PolynomialError,
    cyclotomic,
    discriminant,
    exact_quotient,
    format_polynomial,
    is_reciprocal,
    is_root_of_unity_product,
    parse_polynomial,
    poly_gcd,
    power_map,
    primitive_part,
    resultant,
    split_cyclotomic,
    squarefree_decomposition,
)
from oracles import numeric_roots, sylvester_resultant

coeff_lists = st.lists(st.integers(-9, 9), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)
monic = st.lists(st.integers(-6, 6), min_size=1, max_size=6).map(lambda c: IntPolynomial(c + [1]))


def test_parse_formats_agree():
    a = parse_polynomial("x^3 - x - 1")
    assert a == parse_polynomial("-1,-1,0,1")
    assert a == parse_polynomial("X**3-x-1")
    assert a == parse_polynomial("x^3−x−1")
    assert parse_polynomial("2x^2+3*x") == IntPolynomial([0, 3, 2])
    assert parse_polynomial("5") == IntPolynomial([5])


@pytest.mark.parametrize("bad", ["", "x^", "x^3-x+", "1,a,2", "x^2x", "y+1"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(PolynomialError):
        parse_polynomial(bad)


def test_zero_polynomial_rejected():
    with pytest.raises(PolynomialError):
        IntPolynomial([0, 0])


@given(coeff_lists)
def test_format_parse_round_trip(c):
    f = IntPolynomial(c)
    assert parse_polynomial(format_polynomial(f.coeffs)) == f


@settings(max_examples=300, deadline=None)
@given(coeff_lists, coeff_lists)
def test_resultant_matches_sylvester_oracle(a, b):
    assert resultant(IntPolynomial(a), IntPolynomial(b)) == sylvester_resultant(a, b)


@given(coeff_lists, coeff_lists)
def test_resultant_symmetry(a, b):
    f, g = IntPolynomial(a), IntPolynomial(b)
    assert resultant(f, g) == (-1) ** (f.degree * g.degree) * resultant(g, f)


def test_known_discriminants():
    assert discriminant(parse_polynomial("x^2-x-1")) == 5
    assert discriminant(parse_polynomial("x^3-x-1")) == -23
    assert discriminant(parse_polynomial("x^2-2x+1")) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=3, max_size=6))
def test_discriminant_against_sympy(c):
    assume(c[-1] != 0)
    x = sympy.Symbol("x")
    expr = sum(ci * x**i for i, ci in enumerate(c))
    assert discriminant(IntPolynomial(c)) == sympy.discriminant(expr, x)


@settings(max_examples=60, deadline=None)
@given(monic, st.sampled_from([2, 3, 5, 7]))
def test_power_map_has_powered_roots(f, p):
    fp = power_map(f, p)
    assert fp.is_monic() and fp.degree == f.degree
    # oracle: expand prod (x - r^p) numerically and round
    rs = [complex(r**p) for r in numeric_roots(f.coeffs, 80)]
    approx = list(reversed(np.poly(rs)))
    scale = max(abs(c) for c in fp.coeffs)
    assert all(abs(a - e) < 1e-7 * scale for a, e in zip(approx, fp.coeffs))


def test_power_map_example():
    # roots of x^2-x-1 squared: phi^2 and phi'^2, sum 3, product 1
    assert power_map(parse_polynomial("x^2-x-1"), 2) == parse_polynomial("x^2-3x+1")


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 12, 15, 30, 105])
def test_cyclotomic_against_sympy(n):
    expected = sympy.Poly(sympy.cyclotomic_poly(n, sympy.Symbol("x")))
    assert cyclotomic(n).coeffs == tuple(int(c) for c in reversed(expected.all_coeffs()))


def test_root_of_unity_detection():
    assert is_root_of_unity_product(cyclotomic(7) * cyclotomic(12) ** 2)
    assert is_root_of_unity_product(parse_polynomial("x^2-1"))
    assert not is_root_of_unity_product(parse_polynomial("x^3-x-1"))
    # Lehmer's polynomial is reciprocal but not a product of cyclotomics
    lehmer = parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")
    assert is_reciprocal(lehmer) and not is_root_of_unity_product(lehmer)


def test_split_cyclotomic_strips_exactly():
    core = parse_polynomial("x^3-x-1")
    f = core * cyclotomic(3) * cyclotomic(4) ** 2
    found, rest = split_cyclotomic(f)
    assert rest == core
    assert sorted(found) == [(3, 1), (4, 2)]


def test_primitive_part_and_quotient():
    c, g = primitive_part(IntPolynomial([-6, 4, -2]))
    assert c == -2 and g == IntPolynomial([3, -2, 1])
    assert exact_quotient(parse_polynomial("x^2-1"), parse_polynomial("x+1")) == parse_polynomial("x-1")
    with pytest.raises(ArithmeticError):
        exact_quotient(parse_polynomial("x^2+1"), parse_polynomial("x+1"))


@settings(max_examples=80, deadline=None)
@given(monic, monic)
def test_gcd_divides_both(f, g):
    h = poly_gcd(f * g, f)
    exact_quotient(f * g, h)
    exact_quotient(f, h)
    assert h.degree == f.degree


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(monic, st.integers(1, 3)), min_size=1, max_size=3), st.integers(1, 5))
def test_squarefree_decomposition_reconstructs(parts, c):
    f = IntPolynomial([c])
    for g, e in parts:
        f = f * g**e
    content, factors = squarefree_decomposition(f)
    rebuilt = IntPolynomial([content])
    for g, e in factors:
        rebuilt = rebuilt * g**e
        # each factor is squarefree
        assert poly_gcd(g, IntPolynomial(g.derivative())).degree == 0
    assert rebuilt == f


def test_reverse_and_negate():
    f = parse_polynomial("x^3+2x-5")
    assert f.reverse() == parse_polynomial("-5x^3+2x^2+1")
    assert f.negate_x() == parse_polynomial("-x^3-2x-5")
    assert f.compose_power(2) == parse_polynomial("x^6+2x^2-5")
    assert f(2) == 7
    assert math.gcd(*IntPolynomial([4, 6]).coeffs) == IntPolynomial([4, 6]).content()
