"""
Weighted grading of the canonical index-3 algebra and regularity checks.

Under ``deg x = -1``, ``deg y = 2`` the generators ``y, xy, x^2*y, x^3*y + alpha*x``
have degrees ``2, 1, 0, -1``. Every homogeneous member of negative degree ``-m``
is ``(x^3*y + alpha*x)^m * g(x^2*y)``, and no member is regular in both variables.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Tuple

import pandas as pd

from algebra.errors import NotHomogeneousNegative, NotInAlgebra, PreconditionError, ZeroOrConstantInput
from algebra.laurent_poly import (
    DG_WEIGHTS,
    LaurentPoly,
    LinearMap,
    divide_exact,
    evaluate,
    format_rational,
    is_regular_in,
    linear_substitute,
    require_polynomial,
    substitute,
    total_degree,
    weighted_components,
)
from algebra.linear_system import row_basis
from models.generator_expression import monomial_values
from models.wright_algebra import CanonicalIndex3Algebra, is_member

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NegativeFactor:
    """``f = (x^3*y + alpha*x)^m * g(z)`` with ``z = x^2*y``; ``g`` lives in the first slot"""
    m: int
    g: LaurentPoly

    def g_text(self) -> str:
        return self.g.to_text(('z',))

    def reconstruct(self, algebra: CanonicalIndex3Algebra) -> LaurentPoly:
        z = LaurentPoly.monomial(2, 1)
        return algebra.top_generator ** self.m * substitute(self.g, z, LaurentPoly.y())


def negative_degree_factor(algebra: CanonicalIndex3Algebra, f: LaurentPoly) -> NegativeFactor:
    """
    Factor a homogeneous element of negative weighted degree

    Args:
        algebra: The canonical index-3 algebra
        f: Nonzero polynomial, homogeneous of degree ``-m < 0`` under (-1, 2)

    Returns:
        ``NegativeFactor(m, g)`` with ``f = (x^3*y + alpha*x)^m * g(x^2*y)``
    """
    require_polynomial(f)
    components = weighted_components(f, DG_WEIGHTS)
    if len(components) != 1:
        raise NotHomogeneousNegative(f"{f} is not weighted-homogeneous (degrees {list(components)})")
    degree = next(iter(components))
    if degree >= 0:
        raise NotHomogeneousNegative(f"{f} has nonnegative weighted degree {degree}")

    m = -degree
    quotient = divide_exact(f, algebra.top_generator ** m)
    if quotient is None:
        raise NotInAlgebra(f"(x^3*y + {format_rational(algebra.alpha)}*x)^{m} does not divide {f}")
    g_terms = {}
    for (ex, ey), coeff in quotient.terms():
        if ex != 2 * ey:
            raise NotInAlgebra(f"quotient term x^{ex}*y^{ey} of {f} is not a power of x^2*y")
        g_terms[(ey, 0)] = coeff
    return NegativeFactor(m, LaurentPoly(g_terms))


# Regularity

def _top_form(p: LaurentPoly) -> LaurentPoly:
    n = total_degree(p)
    return LaurentPoly({key: coeff for key, coeff in p.terms() if key[0] + key[1] == n})


def _is_regular_in_both(p: LaurentPoly) -> bool:
    return is_regular_in(p, 'x') and is_regular_in(p, 'y')


def regularizing_transform(p: LaurentPoly) -> LinearMap:
    """
    First integer LinearMap making ``p`` regular in both variables

    The identity is tried first. After that matrices are enumerated by increasing
    max-absolute-entry ``h``, then lexicographically on ``(a, b, c, d)``.
    """
    require_polynomial(p)
    if p.is_zero() or total_degree(p) < 1:
        raise ZeroOrConstantInput(f"{p} has no positive total degree")
    if _is_regular_in_both(p):
        return LinearMap.identity()

    top = _top_form(p)
    height = 0
    while True:
        height += 1
        for a, b, c, d in product(range(-height, height + 1), repeat=4):
            if max(abs(a), abs(b), abs(c), abs(d)) != height or a * d - b * c == 0:
                continue
            # coefficients of v^n and w^n in the substituted top form
            if not evaluate(top, a, c) or not evaluate(top, b, d):
                continue
            linear_map = LinearMap(a, b, c, d)
            if _is_regular_in_both(linear_substitute(p, linear_map)):
                logger.debug(f"Regularized {p} with {linear_map.entries_text()} at height {height}")
                return linear_map


@dataclass
class LemmaObstruction:
    polynomial: LaurentPoly
    linear_map: LinearMap
    transformed: LaurentPoly
    regular_in_v: bool
    regular_in_w: bool
    member: bool
    transformed_member: bool

    @property
    def violation(self) -> bool:
        """A member regular in both variables would contradict the non-regularity lemma"""
        return self.transformed_member and self.regular_in_v and self.regular_in_w

    def to_dict(self) -> Dict:
        return {
            'polynomial': self.polynomial.to_text(),
            'map': self.linear_map.to_dict(),
            'transformed': self.transformed.to_text(('v', 'w')),
            'regular_in_v': self.regular_in_v,
            'regular_in_w': self.regular_in_w,
            'member': self.member,
            'transformed_member': self.transformed_member,
            'violation': self.violation,
        }


def lemma_obstruction(algebra: CanonicalIndex3Algebra, p: LaurentPoly) -> LemmaObstruction:
    """Regularize ``p`` and check that the regular form has left the algebra"""
    linear_map = regularizing_transform(p)
    transformed = linear_substitute(p, linear_map)
    report = LemmaObstruction(
        polynomial=p,
        linear_map=linear_map,
        transformed=transformed,
        regular_in_v=is_regular_in(transformed, 'x'),
        regular_in_w=is_regular_in(transformed, 'y'),
        member=is_member(algebra, p),
        transformed_member=is_member(algebra, transformed),
    )
    if report.violation:
        logger.error(f"Regular member found in {algebra.describe()}: {transformed}")
    return report


# Exhaustive non-regularity verification

@dataclass
class DegreeCheck:
    degree: int
    products: int
    dimension: int
    regular_found: bool
    witness: Optional[LaurentPoly] = None


@dataclass
class LemmaReport:
    alpha: str
    max_degree: int
    slack: int
    checks: List[DegreeCheck] = field(default_factory=list)

    @property
    def none_found(self) -> bool:
        return not any(check.regular_found for check in self.checks)

    @property
    def verdict(self) -> str:
        return 'none found' if self.none_found else 'REGULAR ELEMENT FOUND'

    def records(self) -> List[Dict]:
        return [{
            'degree': check.degree,
            'products': check.products,
            'dimension': check.dimension,
            'verdict': 'REGULAR ELEMENT FOUND' if check.regular_found else 'none found',
            'witness': check.witness.to_text() if check.witness is not None else '',
        } for check in self.checks]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.records())

    def to_dict(self) -> Dict:
        return {
            'alpha': self.alpha,
            'max_degree': self.max_degree,
            'slack': self.slack,
            'verdict': self.verdict,
            'degrees': self.records(),
        }


def _product_exponents(degrees: List[int], limit: int) -> List[Tuple[int, ...]]:
    """Nonconstant exponent tuples with ``sum e_i * degrees[i] <= limit``"""
    results: List[Tuple[int, ...]] = []

    def extend(prefix: Tuple[int, ...], remaining: int):
        index = len(prefix)
        if index == len(degrees):
            if any(prefix):
                results.append(prefix)
            return
        for e in range(remaining // degrees[index] + 1):
            extend(prefix + (e,), remaining - e * degrees[index])

    extend((), limit)
    return sorted(results, key=lambda e: (sum(e), tuple(-v for v in e)))


def _regular_witness(rows: List[List], x_col: int, y_col: int, coordinates) -> LaurentPoly:
    with_x = next(row for row in rows if row[x_col])
    with_y = next(row for row in rows if row[y_col])
    for t in range(3):
        combined = [u + t * v for u, v in zip(with_x, with_y)]
        if combined[x_col] and combined[y_col]:
            return LaurentPoly({key: value for key, value in zip(coordinates, combined) if value})
    raise RuntimeError("no regular combination among three trials")


def _check_degree(algebra: CanonicalIndex3Algebra, n: int, slack: int) -> DegreeCheck:
    generator_degrees = [total_degree(t) for t in algebra.generators]
    exponents = _product_exponents(generator_degrees, n + slack)
    values = monomial_values(exponents, algebra.generators)
    vectors = [values[e].as_dict() for e in exponents]

    coordinates = sorted({key for vector in vectors for key in vector},
                         key=lambda key: (-(key[0] + key[1]), -key[0]))
    basis, pivots = row_basis(vectors, coordinates)
    # rows pivoting at degree <= k span the members of degree <= k
    column_degree = [key[0] + key[1] for key in coordinates]
    dimension = sum(1 for pivot in pivots if column_degree[pivot] <= n)

    for k in range(1, n + 1):
        rows = [row for row, pivot in zip(basis, pivots) if column_degree[pivot] <= k]
        if (k, 0) not in coordinates or (0, k) not in coordinates:
            continue
        x_col, y_col = coordinates.index((k, 0)), coordinates.index((0, k))
        if any(row[x_col] for row in rows) and any(row[y_col] for row in rows):
            witness = _regular_witness(rows, x_col, y_col, coordinates)
            logger.error(f"Degree {k} member regular in both variables: {witness}")
            return DegreeCheck(n, len(exponents), dimension, True, witness)
    return DegreeCheck(n, len(exponents), dimension, False)


def verify_no_regular_elements(algebra: CanonicalIndex3Algebra, max_degree: int,
                               slack: int = 0, workers: int = 1) -> LemmaReport:
    """
    Certify that no member of degree at most ``max_degree`` is regular in x and y

    For each n the span of generator products of total degree at most ``n + slack``
    is intersected with polynomials of degree at most n. A member of degree k is
    regular in both variables iff both coefficient functionals ``[x^k]`` and
    ``[y^k]`` are nonzero on that subspace, since a vector space is never the union
    of two proper subspaces. Constants are excluded.

    Args:
        algebra: The canonical index-3 algebra
        max_degree: Largest total degree D to certify (>= 1)
        slack: Extra product degree admitted before intersecting
        workers: Threads used across degrees; the report order is always 1..D

    Returns:
        LemmaReport with one DegreeCheck per degree
    """
    if max_degree < 1:
        raise PreconditionError(f"max degree must be >= 1, got {max_degree}")
    report = LemmaReport(format_rational(algebra.alpha), max_degree, slack)
    degrees = range(1, max_degree + 1)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        report.checks = list(executor.map(lambda n: _check_degree(algebra, n, slack), degrees))
    logger.info(f"Lemma check for {algebra.describe()} up to degree {max_degree}: {report.verdict}")
    return report
