#!/usr/bin/env python3
"""
Tests for Wright algebras: generators, chart membership and generator expressions
"""

import random
import sys
from pathlib import Path

import pytest

# Add src to Python path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from algebra.errors import InvalidAlgebra, NotAPolynomial
from algebra.laurent_poly import LaurentPoly, to_rational
from algebra.poly_parser import parse_poly
from models.generator_expression import (
    GeneratorExpression,
    monomial_values,
    monomials_up_to,
    parse_generator_expression,
    t_symbols,
)
from models.wright_algebra import (
    CanonicalIndex3Algebra,
    WrightAlgebra,
    canonical_from_wright,
    chart_inverse,
    chart_transform,
    chart_witness,
    default_bound,
    express_in_generators,
    generators,
    is_member,
    weighted_degree_table,
)

P = parse_poly
W3 = WrightAlgebra(3, (0, 1))


def random_rational(rng, height):
    return to_rational(f"{rng.randint(-height, height)}/{rng.randint(1, height)}")


def random_algebra(rng, max_m=5, height=5):
    m = rng.randint(2, max_m)
    while True:
        alphas = tuple(random_rational(rng, height) for _ in range(m - 1))
        if any(alphas):
            return WrightAlgebra(m, alphas)


def random_expression(rng, algebra, max_degree=4, terms=4):
    monomials = monomials_up_to(algebra.m + 1, rng.randint(1, max_degree))
    chosen = rng.sample(monomials, min(terms, len(monomials)))
    return GeneratorExpression({mono: rng.randint(-3, 3) for mono in chosen}, algebra.symbols)


# Generators

def test_generators():
    assert generators(W3) == [P("y"), P("x*y"), P("x^2*y"), P("x^3*y + x")]
    assert generators(WrightAlgebra(2, (1,))) == [P("y"), P("x*y"), P("x^2*y + x")]
    assert WrightAlgebra(4, (1, 2, 3)).generators[4] == P("x^4*y + x^3 + 2*x^2 + 3*x")


def test_canonical_algebra():
    algebra = CanonicalIndex3Algebra(1)
    assert algebra.wright == W3
    assert algebra.top_generator == P("x^3*y + x")
    assert weighted_degree_table(algebra) == [2, 1, 0, -1]
    assert canonical_from_wright(WrightAlgebra(3, (0, to_rational("-2/3")))).alpha == to_rational("-2/3")


@pytest.mark.parametrize("m, alphas", [(1, ()), (3, (1,)), (3, (0, 0)), (2, (0,))])
def test_invalid_algebra(m, alphas):
    with pytest.raises(InvalidAlgebra):
        WrightAlgebra(m, alphas)


def test_invalid_canonical_algebra():
    with pytest.raises(InvalidAlgebra):
        CanonicalIndex3Algebra(0)
    with pytest.raises(InvalidAlgebra):
        canonical_from_wright(WrightAlgebra(3, (1, 1)))


def test_algebra_dict_round_trip():
    algebra = WrightAlgebra(3, (0, to_rational("5/2")))
    assert algebra.to_dict() == {'m': 3, 'alphas': ['0', '5/2']}
    assert WrightAlgebra.from_dict(algebra.to_dict()) == algebra


# Chart criterion

def test_chart_transform():
    assert chart_transform(W3, P("y")) == P("x^3*y - x^2")
    assert chart_transform(W3, P("x^3*y + x")) == P("y")
    assert chart_transform(WrightAlgebra(2, (1,)), P("x")) == P("x^-1")


def test_chart_transform_rejects_laurent_input():
    with pytest.raises(NotAPolynomial):
        chart_transform(W3, P("x^-1*y"))


def test_is_member():
    assert is_member(W3, P("x^3*y + x"))
    assert not is_member(W3, P("x"))
    assert is_member(W3, P("5"))
    assert is_member(WrightAlgebra(5, (1, 0, 0, 2)), LaurentPoly.constant(5))


def test_chart_witness():
    assert chart_witness(W3, P("x")) == P("x^-1")
    assert chart_witness(W3, P("x^4*y^2 + x^2*y")).is_zero()
    assert chart_witness(W3, P("x^2 + y")) == P("x^-2")


def test_chart_involution():
    rng = random.Random(8)
    for _ in range(200):
        algebra = random_algebra(rng)
        p = LaurentPoly({(rng.randint(0, 4), rng.randint(0, 3)): random_rational(rng, 5) for _ in range(4)})
        assert chart_inverse(algebra, chart_transform(algebra, p)) == p


# Generator expressions

def test_monomial_order():
    assert monomials_up_to(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert monomials_up_to(3, 1, include_constant=False) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    values = monomial_values([(2, 1)], [P("x"), P("y")])
    assert values[(2, 1)] == P("x^2*y")


def test_generator_expression_text():
    expression = parse_generator_expression("T0^2 - 1/2*T1*T3", t_symbols(3))
    assert expression.to_text() == "T0^2 - 1/2*T1*T3"
    assert expression.evaluate(W3.generators) == P("y^2 - 1/2*x^4*y^2 - 1/2*x^2*y")
    assert expression.total_degree() == 2
    assert parse_generator_expression("0", t_symbols(3)).is_zero()


def test_express_in_generators():
    assert express_in_generators(W3, P("y^2"), 2).to_text() == "T0^2"
    assert express_in_generators(W3, P("x^4*y^2 + x^2*y"), 2).to_text() == "T1*T3"
    assert express_in_generators(W3, P("3")).to_text() == "3"


def test_express_not_found():
    assert express_in_generators(W3, P("x")) is None
    assert express_in_generators(W3, P("x"), 4) is None
    # y^3 needs T-degree 3
    assert express_in_generators(W3, P("y^3"), 2) is None


def test_default_bound():
    assert default_bound(P("x^3*y + x")) == 5
    assert default_bound(LaurentPoly.zero()) == 0


def test_membership_agrees_with_expression():
    rng = random.Random(2025)
    for _ in range(200):
        algebra = random_algebra(rng)
        expression = random_expression(rng, algebra)
        p = expression.evaluate(algebra.generators)
        assert is_member(algebra, p)
        found = express_in_generators(algebra, p, expression.total_degree())
        assert found is not None
        assert found.evaluate(algebra.generators) == p


def test_non_members():
    rng = random.Random(99)
    for _ in range(50):
        algebra = random_algebra(rng)
        p = random_expression(rng, algebra, max_degree=3).evaluate(algebra.generators) + P("x")
        assert not is_member(algebra, p)
        assert not chart_witness(algebra, p).is_zero()
