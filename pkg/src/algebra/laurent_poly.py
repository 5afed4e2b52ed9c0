"""
Exact sparse bivariate Laurent polynomials over the rationals.

Coefficients are elements of sympy's ``QQ`` ground domain (gmpy2 ``mpq`` when
available, ``PythonMPQ`` otherwise), so every operation is exact. The first
variable (``x``) may carry negative exponents, the second (``y``) may not.
"""

import logging
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.polys.domains import QQ

from algebra.errors import (
    NonInvertibleImage,
    NotAPolynomial,
    PolyParseError,
    PreconditionError,
    SingularMap,
    ZeroPolynomial,
)

logger = logging.getLogger(__name__)

Rational = QQ.dtype
Exponent = Tuple[int, int]

# Degree of the zero polynomial; compares below every integer and is not one.
NEG_INFINITY = -np.inf

_VARIABLE_SLOTS = {'x': 0, 'y': 1, 'v': 0, 'w': 1}


def to_rational(value) -> Rational:
    """
    Convert a scalar to an exact ``QQ`` element

    Args:
        value: int, ``QQ`` element, ``Fraction``, sympy Rational or a string such as ``"-2/3"``

    Returns:
        The value as a ``QQ`` element in lowest terms
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, numbers.Integral):
        return QQ(int(value))
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, sympy.Rational):
        return QQ.from_sympy(value)
    if isinstance(value, str):
        try:
            parsed = sympy.Rational(value.strip())
        except (TypeError, ValueError, sympy.SympifyError) as e:
            raise PolyParseError(f"not a rational number: {value!r}") from e
        return QQ.from_sympy(parsed)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def format_rational(value) -> str:
    """Render a rational as ``p`` or ``p/q``"""
    value = to_rational(value)
    if value.denominator == 1:
        return str(int(value.numerator))
    return f"{int(value.numerator)}/{int(value.denominator)}"


def format_sum(terms: Iterable[Tuple[Rational, Sequence[Tuple[str, int]]]]) -> str:
    """
    Render ``(coefficient, [(atom, exponent), ...])`` terms in the text grammar

    Zero exponents are omitted, unit coefficients are implicit and an empty sum is ``0``.
    """
    pieces = []
    for coeff, powers in terms:
        factors = [name if exp == 1 else f"{name}^{exp}" for name, exp in powers if exp != 0]
        magnitude = abs(coeff)
        if not factors:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = '*'.join(factors)
        else:
            body = format_rational(magnitude) + '*' + '*'.join(factors)
        if not pieces:
            pieces.append(('-' if coeff < 0 else '') + body)
        else:
            pieces.append((' - ' if coeff < 0 else ' + ') + body)
    return ''.join(pieces) or '0'


def _slot(var: str) -> int:
    try:
        return _VARIABLE_SLOTS[var]
    except KeyError:
        raise ValueError(f"unknown variable {var!r}; expected one of x, y, v, w") from None


def _grlex_key(exponent: Exponent) -> Tuple[int, int, int]:
    return (exponent[0] + exponent[1], exponent[0], exponent[1])


class LaurentPoly:
    """
    Immutable sparse polynomial in ``x^{±1}`` and ``y``.

    Terms are kept in a dict keyed by ``(e_x, e_y)``; zero coefficients are never stored,
    so the zero polynomial is the empty map.
    """

    __slots__ = ('_terms', '_hash')

    def __init__(self, terms: Optional[Mapping[Exponent, object]] = None):
        cleaned: Dict[Exponent, Rational] = {}
        for (ex, ey), coeff in (terms or {}).items():
            ex, ey = int(ex), int(ey)
            if ey < 0:
                raise ValueError(f"negative y-exponent in term ({ex}, {ey})")
            value = to_rational(coeff)
            if value:
                cleaned[(ex, ey)] = cleaned.get((ex, ey), QQ(0)) + value
        self._terms = {key: value for key, value in cleaned.items() if value}
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: Dict[Exponent, Rational]) -> 'LaurentPoly':
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    # Constructors

    @classmethod
    def zero(cls) -> 'LaurentPoly':
        return cls._from_clean({})

    @classmethod
    def constant(cls, value) -> 'LaurentPoly':
        value = to_rational(value)
        return cls._from_clean({(0, 0): value} if value else {})

    @classmethod
    def monomial(cls, ex: int, ey: int, coeff=1) -> 'LaurentPoly':
        return cls({(ex, ey): coeff})

    @classmethod
    def x(cls) -> 'LaurentPoly':
        return cls._from_clean({(1, 0): QQ(1)})

    @classmethod
    def y(cls) -> 'LaurentPoly':
        return cls._from_clean({(0, 1): QQ(1)})

    # Inspection

    def terms(self) -> List[Tuple[Exponent, Rational]]:
        """Terms in canonical display order, ascending lexicographic on ``(e_x, e_y)``"""
        return sorted(self._terms.items())

    def as_dict(self) -> Dict[Exponent, Rational]:
        return dict(self._terms)

    def coefficient(self, ex: int, ey: int) -> Rational:
        return self._terms.get((ex, ey), QQ(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0, 0)}

    def is_polynomial(self) -> bool:
        """True for the ``PolynomialXY`` subtype: no negative x-exponents"""
        return all(ex >= 0 for ex, _ in self._terms)

    def y_degree(self) -> Optional[int]:
        return max((ey for _, ey in self._terms), default=None)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Exponent, Rational]]:
        return iter(self.terms())

    def __bool__(self) -> bool:
        return bool(self._terms)

    # Arithmetic

    @staticmethod
    def _coerce(other) -> 'LaurentPoly':
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.constant(other)

    def __add__(self, other) -> 'LaurentPoly':
        other = self._coerce(other)
        terms = dict(self._terms)
        for key, value in other._terms.items():
            total = terms.get(key, QQ(0)) + value
            if total:
                terms[key] = total
            else:
                terms.pop(key, None)
        return LaurentPoly._from_clean(terms)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentPoly':
        return LaurentPoly._from_clean({key: -value for key, value in self._terms.items()})

    def __sub__(self, other) -> 'LaurentPoly':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'LaurentPoly':
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> 'LaurentPoly':
        if not isinstance(other, LaurentPoly):
            factor = to_rational(other)
            if not factor:
                return LaurentPoly.zero()
            return LaurentPoly._from_clean({key: value * factor for key, value in self._terms.items()})
        terms: Dict[Exponent, Rational] = {}
        for (ax, ay), ac in self._terms.items():
            for (bx, by), bc in other._terms.items():
                key = (ax + bx, ay + by)
                terms[key] = terms.get(key, QQ(0)) + ac * bc
        return LaurentPoly._from_clean({key: value for key, value in terms.items() if value})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> 'LaurentPoly':
        if not isinstance(exponent, numbers.Integral) or exponent < 0:
            raise ValueError("polynomial powers need a nonnegative integer exponent")
        result = LaurentPoly.constant(1)
        base = self
        exponent = int(exponent)
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        try:
            return self._terms == LaurentPoly.constant(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((key, (int(v.numerator), int(v.denominator)))
                                        for key, v in self._terms.items()))
        return self._hash

    # Text

    def to_text(self, names: Tuple[str, ...] = ('x', 'y')) -> str:
        """Render in the polynomial text grammar, e.g. ``x + 1/2*x^3*y``"""
        first_name = names[0]
        second_name = names[1] if len(names) > 1 else 'y'
        return format_sum((coeff, ((first_name, ex), (second_name, ey))) for (ex, ey), coeff in self.terms())

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r})"


@dataclass(frozen=True)
class WeightVector:
    """Weights ``deg x = w_x``, ``deg y = w_y``; the index-3 algebra is graded by (-1, 2)"""
    w_x: int
    w_y: int

    def __post_init__(self):
        if self.w_x == 0 and self.w_y == 0:
            raise PreconditionError("weight vector must not be (0, 0)")

    def degree_of(self, exponent: Exponent) -> int:
        return self.w_x * exponent[0] + self.w_y * exponent[1]


DG_WEIGHTS = WeightVector(-1, 2)


@dataclass(frozen=True)
class LinearMap:
    """Substitution ``x -> a*v + b*w``, ``y -> c*v + d*w`` with nonzero determinant"""
    a: Rational
    b: Rational
    c: Rational
    d: Rational

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            object.__setattr__(self, name, to_rational(getattr(self, name)))
        if not self.determinant():
            raise SingularMap(f"linear map {self.entries_text()} has determinant 0")

    @classmethod
    def identity(cls) -> 'LinearMap':
        return cls(1, 0, 0, 1)

    def determinant(self) -> Rational:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> 'LinearMap':
        det = self.determinant()
        return LinearMap(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def entries(self) -> Tuple[Rational, Rational, Rational, Rational]:
        return (self.a, self.b, self.c, self.d)

    def entries_text(self) -> str:
        return '(' + ', '.join(format_rational(e) for e in self.entries()) + ')'

    def images(self) -> Tuple[LaurentPoly, LaurentPoly]:
        v, w = LaurentPoly.x(), LaurentPoly.y()
        return (v * self.a + w * self.b, v * self.c + w * self.d)

    def to_dict(self) -> Dict[str, str]:
        return {name: format_rational(value) for name, value in zip('abcd', self.entries())}

    def __str__(self) -> str:
        x_image, y_image = self.images()
        return f"x -> {x_image.to_text(('v', 'w'))}, y -> {y_image.to_text(('v', 'w'))}"


# Operations

def partial_derivative(p: LaurentPoly, var: str) -> LaurentPoly:
    """Formal partial derivative; the Laurent rule applies to negative x-exponents"""
    slot = _slot(var)
    terms: Dict[Exponent, Rational] = {}
    for (ex, ey), coeff in p._terms.items():
        exp = ex if slot == 0 else ey
        if exp == 0:
            continue
        key = (ex - 1, ey) if slot == 0 else (ex, ey - 1)
        terms[key] = coeff * exp
    return LaurentPoly._from_clean(terms)


def require_polynomial(p: LaurentPoly, what: str = 'input') -> None:
    if not p.is_polynomial():
        raise NotAPolynomial(f"{what} has negative x-exponents: {p}")


def jacobian_determinant(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """``p_x * q_y - p_y * q_x``"""
    require_polynomial(p, 'p')
    require_polynomial(q, 'q')
    return (partial_derivative(p, 'x') * partial_derivative(q, 'y')
            - partial_derivative(p, 'y') * partial_derivative(q, 'x'))


def _monomial_inverse(image: LaurentPoly) -> LaurentPoly:
    if len(image) != 1:
        raise NonInvertibleImage(f"cannot invert the non-monomial image {image}")
    (ex, ey), coeff = image.terms()[0]
    if ey != 0:
        raise NonInvertibleImage(f"cannot invert {image}: y is never inverted")
    return LaurentPoly._from_clean({(-ex, 0): 1 / coeff})


class _PowerCache:
    """Powers of one substitution image, including negative powers of monomials"""

    def __init__(self, base: LaurentPoly):
        self.base = base
        self.positive = {0: LaurentPoly.constant(1), 1: base}
        self.negative: Dict[int, LaurentPoly] = {}
        self._inverse: Optional[LaurentPoly] = None

    def get(self, exponent: int) -> LaurentPoly:
        if exponent >= 0:
            if exponent not in self.positive:
                top = max(self.positive)
                current = self.positive[top]
                for k in range(top + 1, exponent + 1):
                    current = current * self.base
                    self.positive[k] = current
            return self.positive[exponent]
        if self._inverse is None:
            self._inverse = _monomial_inverse(self.base)
        if -exponent not in self.negative:
            self.negative[-exponent] = self._inverse ** (-exponent)
        return self.negative[-exponent]


def substitute(p: LaurentPoly, x_image: LaurentPoly, y_image: LaurentPoly) -> LaurentPoly:
    """
    Ring homomorphism ``x -> x_image``, ``y -> y_image``

    Args:
        p: Polynomial to rewrite
        x_image: Image of x; must be a single term without y when p has negative x-exponents
        y_image: Image of y

    Returns:
        The composite polynomial
    """
    x_powers = _PowerCache(x_image)
    y_powers = _PowerCache(y_image)
    terms: Dict[Exponent, Rational] = {}
    for (ex, ey), coeff in p._terms.items():
        product = x_powers.get(ex) * y_powers.get(ey)
        for key, value in product._terms.items():
            terms[key] = terms.get(key, QQ(0)) + coeff * value
    return LaurentPoly._from_clean({key: value for key, value in terms.items() if value})


def weighted_components(p: LaurentPoly, w: WeightVector) -> Dict[int, LaurentPoly]:
    """Split ``p`` into weighted-homogeneous components keyed by degree (ascending)"""
    buckets: Dict[int, Dict[Exponent, Rational]] = {}
    for key, coeff in p._terms.items():
        buckets.setdefault(w.degree_of(key), {})[key] = coeff
    return {degree: LaurentPoly._from_clean(buckets[degree]) for degree in sorted(buckets)}


def is_homogeneous(p: LaurentPoly, w: WeightVector) -> bool:
    return len(weighted_components(p, w)) <= 1


def weighted_degree(p: LaurentPoly, w: WeightVector) -> int:
    """Weighted degree of a nonzero homogeneous polynomial"""
    components = weighted_components(p, w)
    if not components:
        raise ZeroPolynomial("the zero polynomial has no weighted degree")
    if len(components) > 1:
        raise PreconditionError(f"{p} is not homogeneous for weights ({w.w_x}, {w.w_y})")
    return next(iter(components))


def total_degree(p: LaurentPoly) -> Union[int, float]:
    """Largest ``e_x + e_y`` over the terms; ``NEG_INFINITY`` for zero"""
    if p.is_zero():
        return NEG_INFINITY
    return max(ex + ey for ex, ey in p._terms)


def is_regular_in(p: LaurentPoly, var: str) -> bool:
    """True iff ``p`` of total degree ``n`` contains the pure term ``var^n``"""
    if p.is_zero():
        raise ZeroPolynomial("regularity is undefined for the zero polynomial")
    require_polynomial(p)
    n = total_degree(p)
    key = (n, 0) if _slot(var) == 0 else (0, n)
    return key in p._terms


def linear_substitute(p: LaurentPoly, linear_map: LinearMap) -> LaurentPoly:
    """``p(a*v + b*w, c*v + d*w)``, returned in the variable slots (v, w)"""
    require_polynomial(p)
    x_image, y_image = linear_map.images()
    return substitute(p, x_image, y_image)


def divide_exact(p: LaurentPoly, q: LaurentPoly) -> Optional[LaurentPoly]:
    """
    Exact quotient ``p / q`` in Q[x, y]

    Returns:
        The quotient when ``q`` divides ``p``, otherwise ``None``
    """
    require_polynomial(p, 'dividend')
    require_polynomial(q, 'divisor')
    if q.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    lead_q = max(q._terms, key=_grlex_key)
    lead_coeff = q._terms[lead_q]
    remainder = dict(p._terms)
    quotient: Dict[Exponent, Rational] = {}
    while remainder:
        lead_r = max(remainder, key=_grlex_key)
        dx, dy = lead_r[0] - lead_q[0], lead_r[1] - lead_q[1]
        if dx < 0 or dy < 0:
            return None
        factor = remainder[lead_r] / lead_coeff
        quotient[(dx, dy)] = factor
        for (ex, ey), coeff in q._terms.items():
            key = (ex + dx, ey + dy)
            value = remainder.get(key, QQ(0)) - factor * coeff
            if value:
                remainder[key] = value
            else:
                remainder.pop(key, None)
    return LaurentPoly._from_clean(quotient)


def evaluate(p: LaurentPoly, x_value, y_value) -> Rational:
    """Exact value of ``p`` at a rational point"""
    x_value, y_value = to_rational(x_value), to_rational(y_value)
    if not x_value and any(ex < 0 for ex, _ in p._terms):
        raise PreconditionError("cannot evaluate negative x-powers at x = 0")
    total = QQ(0)
    for (ex, ey), coeff in p._terms.items():
        x_part = x_value ** ex if ex >= 0 else (1 / x_value) ** (-ex)
        total += coeff * x_part * y_value ** ey
    return total
