import logging
from itertools import combinations_with_replacement
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from algebra.errors import PolyParseError
from algebra.laurent_poly import LaurentPoly, Rational, format_sum, to_rational
from algebra.poly_parser import parse_terms

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def t_symbols(m: int) -> Tuple[str, ...]:
    """Symbol names ``T0 .. Tm`` for the generators of a Wright algebra"""
    return tuple(f"T{k}" for k in range(m + 1))


CERTIFICATE_SYMBOLS = ('P', 'Q')


def monomials_up_to(nsymbols: int, degree: int, include_constant: bool = True) -> List[Monomial]:
    """
    All exponent tuples of total degree at most ``degree``

    Ordered by degree, then within a degree as ``combinations_with_replacement``
    yields them (``T0^2, T0*T1, ..., T1^2, ...``). This is the graded-lex order used
    for every deterministic choice among generator monomials.
    """
    monomials = [tuple([0] * nsymbols)] if include_constant else []
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(range(nsymbols), d):
            exponent = [0] * nsymbols
            for index in combo:
                exponent[index] += 1
            monomials.append(tuple(exponent))
    return monomials


def monomial_values(monomials: Sequence[Monomial], images: Sequence[LaurentPoly]) -> Dict[Monomial, LaurentPoly]:
    """Evaluate generator monomials at ``images``, reusing lower-degree products"""
    values: Dict[Monomial, LaurentPoly] = {tuple([0] * len(images)): LaurentPoly.constant(1)}

    def value_of(monomial: Monomial) -> LaurentPoly:
        if monomial not in values:
            index = next(i for i, exp in enumerate(monomial) if exp)
            parent = monomial[:index] + (monomial[index] - 1,) + monomial[index + 1:]
            values[monomial] = value_of(parent) * images[index]
        return values[monomial]

    for monomial in monomials:
        value_of(tuple(monomial))
    return values


class GeneratorExpression:
    """
    Polynomial in abstract symbols (``T0..Tm`` or ``P, Q``) with rational coefficients.

    Stored as a sparse map from exponent tuples to nonzero coefficients.
    """

    __slots__ = ('symbols', '_terms')

    def __init__(self, terms: Optional[Mapping[Monomial, object]], symbols: Sequence[str]):
        self.symbols = tuple(symbols)
        cleaned: Dict[Monomial, Rational] = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != len(self.symbols) or any(e < 0 for e in exponent):
                raise ValueError(f"exponent {exponent} does not fit symbols {self.symbols}")
            value = to_rational(coeff)
            if value:
                cleaned[exponent] = value
        self._terms = cleaned

    @classmethod
    def from_vector(cls, monomials: Sequence[Monomial], coefficients: Sequence, symbols: Sequence[str]) -> 'GeneratorExpression':
        return cls({mono: coeff for mono, coeff in zip(monomials, coefficients) if coeff}, symbols)

    def terms(self) -> List[Tuple[Monomial, Rational]]:
        """Terms in graded order: by degree, then ``T0`` powers first"""
        return sorted(self._terms.items(), key=lambda item: (sum(item[0]), tuple(-e for e in item[0])))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(exponent) == 0 for exponent in self._terms)

    def total_degree(self) -> int:
        return max((sum(exponent) for exponent in self._terms), default=0)

    def evaluate(self, images: Sequence[LaurentPoly]) -> LaurentPoly:
        """Substitute ``images[k]`` for the k-th symbol"""
        if len(images) != len(self.symbols):
            raise ValueError(f"expected {len(self.symbols)} images, got {len(images)}")
        values = monomial_values(list(self._terms), images)
        result = LaurentPoly.zero()
        for exponent, coeff in self._terms.items():
            result = result + values[exponent] * coeff
        return result

    def to_text(self) -> str:
        return format_sum((coeff, tuple(zip(self.symbols, exponent))) for exponent, coeff in self.terms())

    def to_dict(self) -> Dict:
        return {'symbols': list(self.symbols), 'text': self.to_text()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, GeneratorExpression):
            return NotImplemented
        return self.symbols == other.symbols and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.symbols, frozenset((k, str(v)) for k, v in self._terms.items())))

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"GeneratorExpression({self.to_text()!r})"


def parse_generator_expression(text: str, symbols: Sequence[str]) -> GeneratorExpression:
    """Parse text with atoms drawn from ``symbols`` (e.g. ``"T0^2 - 1/2*T1*T3"``)"""
    index = {name: k for k, name in enumerate(symbols)}
    terms: Dict[Monomial, Rational] = {}
    for coeff, powers in parse_terms(text):
        exponent = [0] * len(symbols)
        for name, power in powers.items():
            if name not in index:
                raise PolyParseError(f"unknown symbol {name!r} in {text!r}; expected {', '.join(symbols)}")
            if power < 0:
                raise PolyParseError(f"negative exponent on {name!r} in {text!r}")
            exponent[index[name]] += power
        key = tuple(exponent)
        terms[key] = terms.get(key, QQ(0)) + coeff
    return GeneratorExpression(terms, symbols)
