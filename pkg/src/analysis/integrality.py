import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

from algebra.errors import PreconditionError
from algebra.laurent_poly import LaurentPoly, require_polynomial
from algebra.linear_system import solve_basic
from models.generator_expression import (
    CERTIFICATE_SYMBOLS,
    GeneratorExpression,
    monomial_values,
    monomials_up_to,
    parse_generator_expression,
)
from algebra.poly_parser import parse_poly

logger = logging.getLogger(__name__)


@dataclass
class IntegralityCertificate:
    """
    Monic relation ``h^d + a_1(p, q)*h^(d-1) + ... + a_d(p, q) = 0``

    Each ``a_i`` is a GeneratorExpression in the symbols ``P, Q``.
    """
    h: LaurentPoly
    d: int
    coefficients: List[GeneratorExpression]

    def relation(self, p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
        """Left-hand side of the relation expanded in x, y; zero for a valid certificate"""
        total = self.h ** self.d
        for i, a_i in enumerate(self.coefficients, start=1):
            total = total + a_i.evaluate([p, q]) * self.h ** (self.d - i)
        return total

    def relation_text(self) -> str:
        pieces = [f"h^{self.d}" if self.d > 1 else "h"]
        for i, a_i in enumerate(self.coefficients, start=1):
            if a_i.is_zero():
                continue
            power = self.d - i
            suffix = '' if power == 0 else ('*h' if power == 1 else f"*h^{power}")
            pieces.append(f"({a_i.to_text()}){suffix}")
        return ' + '.join(pieces) + ' = 0'

    def to_dict(self) -> Dict:
        return {
            'h': self.h.to_text(),
            'd': self.d,
            'coefficients': [a.to_text() for a in self.coefficients],
            'relation': self.relation_text(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'IntegralityCertificate':
        return cls(parse_poly(data['h']), int(data['d']),
                   [parse_generator_expression(text, CERTIFICATE_SYMBOLS) for text in data['coefficients']])


def verify_certificate(certificate: IntegralityCertificate, p: LaurentPoly, q: LaurentPoly) -> bool:
    if len(certificate.coefficients) != certificate.d:
        return False
    return certificate.relation(p, q).is_zero()


def integrality_certificate(h: LaurentPoly, p: LaurentPoly, q: LaurentPoly,
                            d_max: int, coeff_degree_max: int) -> Optional[IntegralityCertificate]:
    """
    Search for a monic relation of ``h`` over ``Q[p, q]``

    For each d the unknowns are the coefficients of ``a_1..a_d`` on the monomials
    ``P^a*Q^b`` of degree at most ``coeff_degree_max``; columns are ordered by i, then
    by graded order of the monomial, and the basic solution is taken.

    Args:
        h: Element to certify
        p: First generator of A
        q: Second generator of A
        d_max: Largest relation degree tried (>= 1)
        coeff_degree_max: Largest total degree of each a_i in P, Q (>= 0)

    Returns:
        The certificate of smallest d, or None. None is not a proof of non-integrality.
    """
    for poly, name in ((h, 'h'), (p, 'p'), (q, 'q')):
        require_polynomial(poly, name)
    if d_max < 1:
        raise PreconditionError(f"d_max must be >= 1, got {d_max}")
    if coeff_degree_max < 0:
        raise PreconditionError(f"coeff_degree_max must be >= 0, got {coeff_degree_max}")

    monomials = monomials_up_to(2, coeff_degree_max)
    values = monomial_values(monomials, [p, q])
    h_powers = [LaurentPoly.constant(1)]
    for _ in range(d_max):
        h_powers.append(h_powers[-1] * h)

    for d in range(1, d_max + 1):
        columns = []
        for i in range(1, d + 1):
            columns.extend((values[mono] * h_powers[d - i]).as_dict() for mono in monomials)
        solution = solve_basic(columns, (-h_powers[d]).as_dict())
        if solution is None:
            continue
        width = len(monomials)
        coefficients = [
            GeneratorExpression.from_vector(monomials, solution[(i - 1) * width:i * width], CERTIFICATE_SYMBOLS)
            for i in range(1, d + 1)
        ]
        certificate = IntegralityCertificate(h, d, coefficients)
        if not verify_certificate(certificate, p, q):
            raise RuntimeError(f"certificate {certificate.relation_text()} failed re-verification")
        logger.info(f"Integrality certificate for {h}: {certificate.relation_text()}")
        return certificate

    logger.info(f"No certificate for {h} with d <= {d_max}, coefficient degree <= {coeff_degree_max} (inconclusive)")
    return None
