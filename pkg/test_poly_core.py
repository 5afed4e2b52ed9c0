#!/usr/bin/env python3
"""
Tests for exact Laurent polynomial arithmetic, parsing and linear substitutions
"""

import random
import sys
from pathlib import Path

import pytest

# Add src to Python path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from algebra.errors import NonInvertibleImage, NotAPolynomial, PolyParseError, SingularMap, ZeroPolynomial
from algebra.laurent_poly import (
    DG_WEIGHTS,
    NEG_INFINITY,
    LaurentPoly,
    LinearMap,
    WeightVector,
    divide_exact,
    evaluate,
    format_rational,
    is_homogeneous,
    is_regular_in,
    jacobian_determinant,
    linear_substitute,
    partial_derivative,
    substitute,
    to_rational,
    total_degree,
    weighted_components,
    weighted_degree,
)
from algebra.poly_parser import parse_poly, parse_terms


def P(text):
    return parse_poly(text)


def random_poly(rng, max_degree=3, terms=4, laurent=False):
    data = {}
    for _ in range(rng.randint(1, terms)):
        ex = rng.randint(-2 if laurent else 0, max_degree)
        ey = rng.randint(0, max_degree)
        data[(ex, ey)] = to_rational(f"{rng.randint(-5, 5)}/{rng.randint(1, 3)}")
    return LaurentPoly(data)


def random_map(rng):
    while True:
        entries = [rng.randint(-3, 3) for _ in range(4)]
        if entries[0] * entries[3] - entries[1] * entries[2]:
            return LinearMap(*entries)


# Arithmetic

def test_ring_ops():
    assert P("x + y") + P("-x") == P("y")
    assert P("x^3*y + x") ** 2 == P("x^6*y^2 + 2*x^4*y + x^2")
    assert (P("x^3*y + x") * 0).is_zero()
    assert P("x - 1") * P("x + 1") == P("x^2 - 1")
    assert P("x^-1") * P("x") == 1


def test_ring_axioms():
    rng = random.Random(41)
    for _ in range(100):
        p, q, r = (random_poly(rng, laurent=True) for _ in range(3))
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p + q == q + p
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r
        assert (p - q) + q == p
        assert p * 1 == p and (p * 0).is_zero()


def test_zero_is_empty_and_coefficients_are_exact():
    p = P("1/3*x + 1/6*x")
    assert p == P("1/2*x")
    assert (p - p).is_zero()
    assert len(P("x - x")) == 0
    assert P("x").coefficient(1, 0) == to_rational("1")


def test_partial_derivative():
    assert partial_derivative(P("x^2*y"), 'x') == P("2*x*y")
    assert partial_derivative(P("x^3*y + x"), 'y') == P("x^3")
    assert partial_derivative(P("7"), 'x').is_zero()
    assert partial_derivative(P("x^-2"), 'x') == P("-2*x^-3")


def test_mixed_partials_commute():
    rng = random.Random(43)
    for _ in range(100):
        p = random_poly(rng, max_degree=4, terms=6, laurent=True)
        assert partial_derivative(partial_derivative(p, 'x'), 'y') == \
            partial_derivative(partial_derivative(p, 'y'), 'x')


def test_jacobian_determinant():
    assert jacobian_determinant(P("x"), P("y")) == 1
    assert jacobian_determinant(P("y"), P("x*y")) == P("-y")
    p = P("x^2 + 3*x*y")
    assert jacobian_determinant(p, p).is_zero()


def test_jacobian_rejects_laurent_input():
    with pytest.raises(NotAPolynomial):
        jacobian_determinant(P("x^-1"), P("y"))


def test_substitute():
    assert substitute(P("x^2*y"), P("x^-1"), P("y")) == P("x^-2*y")
    assert substitute(P("y"), P("x^-1"), P("x^3*y - x^2")) == P("x^3*y - x^2")
    rng = random.Random(7)
    for _ in range(20):
        p = random_poly(rng, laurent=True)
        assert substitute(p, P("x"), P("y")) == p


def test_substitute_is_a_ring_homomorphism():
    rng = random.Random(47)
    for _ in range(50):
        p, q = random_poly(rng, max_degree=2), random_poly(rng, max_degree=2)
        x_image, y_image = random_poly(rng, max_degree=2, terms=3), random_poly(rng, max_degree=2, terms=3)
        assert substitute(p + q, x_image, y_image) == substitute(p, x_image, y_image) + substitute(q, x_image, y_image)
        assert substitute(p * q, x_image, y_image) == substitute(p, x_image, y_image) * substitute(q, x_image, y_image)

    # Laurent inputs need an invertible monomial x-image
    for _ in range(50):
        p, q = random_poly(rng, max_degree=2, laurent=True), random_poly(rng, max_degree=2, laurent=True)
        x_image = LaurentPoly.monomial(rng.choice([-1, 1, 2]), 0, rng.choice([-2, 1, 3]))
        y_image = random_poly(rng, max_degree=2, terms=3)
        assert substitute(p + q, x_image, y_image) == substitute(p, x_image, y_image) + substitute(q, x_image, y_image)
        assert substitute(p * q, x_image, y_image) == substitute(p, x_image, y_image) * substitute(q, x_image, y_image)


def test_substitute_negative_power_needs_monomial_image():
    with pytest.raises(NonInvertibleImage):
        substitute(P("x^-1"), P("x + 1"), P("y"))
    with pytest.raises(NonInvertibleImage):
        substitute(P("x^-1"), P("x*y"), P("y"))


# Gradings and degrees

def test_weighted_components():
    assert weighted_components(P("x + y"), DG_WEIGHTS) == {-1: P("x"), 2: P("y")}
    assert weighted_components(P("x^2*y"), DG_WEIGHTS) == {0: P("x^2*y")}
    assert weighted_components(P("x^3*y + x"), DG_WEIGHTS) == {-1: P("x^3*y + x")}
    assert list(weighted_components(P("y + x + x^2*y"), DG_WEIGHTS)) == [-1, 0, 2]


def test_weighted_degree():
    assert weighted_degree(P("x^3*y + x"), DG_WEIGHTS) == -1
    assert is_homogeneous(P("x^2 + y"), WeightVector(1, 2))
    assert not is_homogeneous(P("x + y"), DG_WEIGHTS)
    with pytest.raises(ZeroPolynomial):
        weighted_degree(LaurentPoly.zero(), DG_WEIGHTS)


def test_components_reassemble():
    rng = random.Random(11)
    for _ in range(30):
        p = random_poly(rng, laurent=True)
        total = LaurentPoly.zero()
        for component in weighted_components(p, DG_WEIGHTS).values():
            total = total + component
        assert total == p


def test_total_degree():
    assert total_degree(P("x^3*y + x")) == 4
    assert total_degree(P("5")) == 0
    assert total_degree(LaurentPoly.zero()) == NEG_INFINITY
    assert total_degree(LaurentPoly.zero()) < -10 ** 9


def test_is_regular_in():
    assert is_regular_in(P("x^2 + y^2"), 'x')
    assert not is_regular_in(P("x*y"), 'x')
    assert not is_regular_in(P("x^3*y + x"), 'x')
    assert is_regular_in(P("y^3 + x"), 'y')
    with pytest.raises(ZeroPolynomial):
        is_regular_in(LaurentPoly.zero(), 'x')


# Linear substitutions

def test_linear_substitute():
    swap = LinearMap(0, 1, 1, 0)
    assert linear_substitute(P("x"), swap) == P("y")
    assert linear_substitute(P("x*y"), LinearMap(1, 1, 1, -1)) == P("x^2 - y^2")
    p = P("x^3*y + 2*x - 7")
    assert linear_substitute(p, LinearMap.identity()) == p


def test_linear_map_checks():
    with pytest.raises(SingularMap):
        LinearMap(1, 2, 2, 4)
    L = LinearMap(2, 1, 1, 1)
    assert L.determinant() == 1
    assert L.entries_text() == "(2, 1, 1, 1)"
    assert L.to_dict() == {'a': '2', 'b': '1', 'c': '1', 'd': '1'}
    assert str(LinearMap(1, 1, 1, -1)) == "x -> w + v, y -> -w + v"


def test_linear_map_inverse_undoes_substitution():
    rng = random.Random(3)
    for _ in range(20):
        p = random_poly(rng)
        L = random_map(rng)
        assert linear_substitute(linear_substitute(p, L), L.inverse()) == p


def test_jacobian_chain_rule():
    rng = random.Random(2024)
    for _ in range(100):
        p, q = random_poly(rng), random_poly(rng)
        L = random_map(rng)
        left = jacobian_determinant(linear_substitute(p, L), linear_substitute(q, L))
        right = linear_substitute(jacobian_determinant(p, q), L) * L.determinant()
        assert left == right


# Division and evaluation

def test_divide_exact():
    assert divide_exact(P("x^2 - y^2"), P("x + y")) == P("x - y")
    assert divide_exact(P("x^4*y^2 + x^2*y"), P("x^3*y + x")) == P("x*y")
    assert divide_exact(P("x^2 + 1"), P("x")) is None
    with pytest.raises(ZeroPolynomial):
        divide_exact(P("x"), LaurentPoly.zero())


def test_divide_exact_recovers_factor():
    rng = random.Random(5)
    for _ in range(30):
        a, b = random_poly(rng), random_poly(rng)
        if b.is_zero():
            continue
        assert divide_exact(a * b, b) == a


def test_evaluate():
    assert evaluate(P("x^2*y + 1/2"), 2, 3) == to_rational("25/2")
    assert evaluate(P("x^-1"), to_rational("1/4"), 0) == 4


# Parsing and formatting

def test_parse_grammar():
    assert P("x^3*y + 1/2*x") == LaurentPoly({(3, 1): 1, (1, 0): to_rational("1/2")})
    assert P("-x") == LaurentPoly({(1, 0): -1})
    assert P("2x y") == P("2*x*y")
    assert P(" x ^ -2 ") == LaurentPoly.monomial(-2, 0)
    assert parse_poly("v^2 - w", ('v', 'w')) == P("x^2 - y")
    assert parse_terms("T1*T3 - 2") == [(to_rational(1), {'T1': 1, 'T3': 1}), (to_rational(-2), {})]


@pytest.mark.parametrize("text", ["", "x +", "y^-1", "z", "x ** 2", "1/0*x", "x $ y"])
def test_parse_errors(text):
    with pytest.raises(PolyParseError):
        parse_poly(text)


def test_text_output():
    assert str(P("x^3*y + x")) == "x + x^3*y"
    assert str(LaurentPoly.zero()) == "0"
    assert P("x*y - y").to_text(('v', 'w')) == "-w + v*w"
    assert format_rational(to_rational("-6/4")) == "-3/2"


def test_text_round_trip():
    rng = random.Random(17)
    for _ in range(50):
        p = random_poly(rng, laurent=True)
        assert parse_poly(str(p)) == p
