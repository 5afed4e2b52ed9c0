"""
Coordinate rings of affine A^1-bundles over P^1.

``WrightAlgebra(m, alphas)`` is the subalgebra ``Q[t_0, ..., t_m]`` of ``Q[x, y]`` with

    t_0 = y,   t_k = x^k*y + alpha_1*x^(k-1) + ... + alpha_(k-1)*x   (1 <= k <= m)

It equals ``Q[x, y]`` intersected with ``Q[x', y']`` where ``x' = 1/x`` and
``y' = t_m``, so membership is decided by rewriting in the second chart and
checking that no negative power of ``x'`` survives.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Tuple, Union

from algebra.errors import InvalidAlgebra, PreconditionError
from algebra.laurent_poly import (
    DG_WEIGHTS,
    LaurentPoly,
    Rational,
    require_polynomial,
    format_rational,
    substitute,
    to_rational,
    weighted_degree,
)
from algebra.linear_system import solve_basic
from models.generator_expression import (
    GeneratorExpression,
    monomial_values,
    monomials_up_to,
    t_symbols,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WrightAlgebra:
    m: int
    alphas: Tuple[Rational, ...]

    def __post_init__(self):
        object.__setattr__(self, 'alphas', tuple(to_rational(a) for a in self.alphas))
        if not isinstance(self.m, int) or self.m < 2:
            raise InvalidAlgebra(f"m must be an integer >= 2, got {self.m!r}")
        if len(self.alphas) != self.m - 1:
            raise InvalidAlgebra(f"expected {self.m - 1} alphas for m={self.m}, got {len(self.alphas)}")
        if not any(self.alphas):
            raise InvalidAlgebra("alphas must not all be zero")

    @cached_property
    def generators(self) -> List[LaurentPoly]:
        """``[t_0, ..., t_m]``"""
        x = LaurentPoly.x()
        result = [LaurentPoly.y()]
        for k in range(1, self.m + 1):
            t_k = LaurentPoly.monomial(k, 1)
            for i in range(1, k):
                t_k = t_k + x ** (k - i) * self.alphas[i - 1]
            result.append(t_k)
        return result

    @property
    def symbols(self) -> Tuple[str, ...]:
        return t_symbols(self.m)

    @cached_property
    def chart_images(self) -> Tuple[LaurentPoly, LaurentPoly]:
        """Images of x and y in the chart coordinates (slot 0 is x', slot 1 is y')"""
        x_image = LaurentPoly.monomial(-1, 0)
        y_image = LaurentPoly.monomial(self.m, 1)
        for i, alpha in enumerate(self.alphas, start=1):
            y_image = y_image - LaurentPoly.monomial(i, 0, alpha)
        return x_image, y_image

    def describe(self) -> str:
        return f"W(m={self.m}, alphas=({', '.join(format_rational(a) for a in self.alphas)}))"

    def to_dict(self) -> Dict:
        return {'m': self.m, 'alphas': [format_rational(a) for a in self.alphas]}

    @classmethod
    def from_dict(cls, data: Dict) -> 'WrightAlgebra':
        return cls(int(data['m']), tuple(to_rational(str(a)) for a in data['alphas']))


@dataclass(frozen=True)
class CanonicalIndex3Algebra:
    """``Q[y, xy, x^2*y, x^3*y + alpha*x]`` with ``alpha != 0``"""
    alpha: Rational

    def __post_init__(self):
        object.__setattr__(self, 'alpha', to_rational(self.alpha))
        if not self.alpha:
            raise InvalidAlgebra("alpha must be nonzero")

    @cached_property
    def wright(self) -> WrightAlgebra:
        return WrightAlgebra(3, (0, self.alpha))

    @property
    def generators(self) -> List[LaurentPoly]:
        return self.wright.generators

    @property
    def m(self) -> int:
        return 3

    @property
    def top_generator(self) -> LaurentPoly:
        """``x^3*y + alpha*x``, the only generator of negative weighted degree"""
        return self.wright.generators[3]

    def describe(self) -> str:
        return f"C(alpha={format_rational(self.alpha)})"

    def to_dict(self) -> Dict:
        return {'alpha': format_rational(self.alpha), **self.wright.to_dict()}


AnyWright = Union[WrightAlgebra, CanonicalIndex3Algebra]


def as_wright(algebra: AnyWright) -> WrightAlgebra:
    return algebra.wright if isinstance(algebra, CanonicalIndex3Algebra) else algebra


def canonical_from_wright(algebra: WrightAlgebra) -> CanonicalIndex3Algebra:
    """The canonical index-3 algebra, when ``algebra`` is ``W(3, (0, alpha))``"""
    if algebra.m != 3 or algebra.alphas[0] != 0:
        raise InvalidAlgebra(f"{algebra.describe()} is not of the form W(m=3, alphas=(0, alpha))")
    return CanonicalIndex3Algebra(algebra.alphas[1])


def generators(algebra: AnyWright) -> List[LaurentPoly]:
    return list(as_wright(algebra).generators)


def chart_transform(algebra: AnyWright, p: LaurentPoly) -> LaurentPoly:
    """Rewrite ``p`` through ``x = 1/x'``, ``y = x'^m*y' - sum alpha_i*x'^i``"""
    require_polynomial(p)
    x_image, y_image = as_wright(algebra).chart_images
    return substitute(p, x_image, y_image)


def chart_inverse(algebra: AnyWright, q: LaurentPoly) -> LaurentPoly:
    """Map a chart polynomial back through ``x' = 1/x``, ``y' = t_m``"""
    wright = as_wright(algebra)
    return substitute(q, LaurentPoly.monomial(-1, 0), wright.generators[-1])


def chart_witness(algebra: AnyWright, p: LaurentPoly) -> LaurentPoly:
    """Terms of the chart form with a negative ``x'`` exponent; zero iff ``p`` is a member"""
    chart = chart_transform(algebra, p)
    return LaurentPoly({key: coeff for key, coeff in chart.terms() if key[0] < 0})


def is_member(algebra: AnyWright, p: LaurentPoly) -> bool:
    return chart_transform(algebra, p).is_polynomial()


def default_bound(p: LaurentPoly) -> int:
    """y-degree plus total degree; every generator carries exactly one y"""
    if p.is_zero():
        return 0
    return p.y_degree() + max(ex + ey for (ex, ey), _ in p.terms())


def express_in_generators(algebra: AnyWright, p: LaurentPoly,
                          t_degree_bound: Optional[int] = None) -> Optional[GeneratorExpression]:
    """
    Write ``p`` as a polynomial in ``T0..Tm`` of total degree at most ``t_degree_bound``

    Args:
        algebra: Wright algebra supplying the generators
        p: Polynomial to rewrite
        t_degree_bound: Largest T-degree tried; defaults to ``default_bound(p)``

    Returns:
        The graded-lex minimal expression, or ``None`` when none exists within the bound.
        ``None`` does not prove non-membership; consult ``is_member``.
    """
    require_polynomial(p)
    wright = as_wright(algebra)
    bound = default_bound(p) if t_degree_bound is None else int(t_degree_bound)
    if bound < 0:
        raise PreconditionError(f"t_degree_bound must be >= 0, got {bound}")

    monomials = monomials_up_to(wright.m + 1, bound)
    values = monomial_values(monomials, wright.generators)
    solution = solve_basic([values[mono].as_dict() for mono in monomials], p.as_dict())
    if solution is None:
        logger.info(f"No expression for {p} in {wright.describe()} up to T-degree {bound} (inconclusive)")
        return None

    expression = GeneratorExpression.from_vector(monomials, solution, wright.symbols)
    if expression.evaluate(wright.generators) != p:
        raise RuntimeError(f"expression {expression} does not reproduce {p}")
    logger.debug(f"Expressed {p} as {expression}")
    return expression


def weighted_degree_table(algebra: CanonicalIndex3Algebra) -> List[int]:
    """Degrees of ``t_0..t_3`` under ``deg x = -1``, ``deg y = 2``"""
    return [weighted_degree(t, DG_WEIGHTS) for t in algebra.generators]
