"""
Parser for the polynomial text grammar

    poly  := term (('+' | '-') term)*
    term  := coeff? ('*'? atom)*
    atom  := name ('^' int)?
    coeff := int ('/' posint)?

Whitespace is insignificant and the first term may carry a sign. Atom names are
single letters or ``T<k>``; callers decide which names are legal.
"""

import re
import logging
from typing import Dict, List, Sequence, Tuple

from sympy.polys.domains import QQ

from algebra.errors import PolyParseError
from algebra.laurent_poly import LaurentPoly, Rational

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r'\s*(?:(?P<num>\d+)|(?P<atom>T\d+|[A-Za-z])|(?P<op>[-+*/^]))')

Term = Tuple[Rational, Dict[str, int]]


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    position = 0
    stripped = text.rstrip()
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if not match:
            raise PolyParseError(f"unexpected character {stripped[position:].lstrip()[:1]!r} in {text!r}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        position = match.end()
    return tokens


class _TermReader:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self, offset: int = 0) -> Tuple[str, str]:
        position = self.index + offset
        if position < len(self.tokens):
            return self.tokens[position]
        return ('end', '')

    def take(self) -> Tuple[str, str]:
        token = self.peek()
        self.index += 1
        return token

    def fail(self, message: str):
        raise PolyParseError(f"{message} in {self.text!r}")

    def read_exponent(self) -> int:
        sign = 1
        if self.peek() == ('op', '-'):
            self.take()
            sign = -1
        kind, value = self.take()
        if kind != 'num':
            self.fail("expected an integer exponent")
        return sign * int(value)

    def read_term(self, sign: int) -> Term:
        coeff = QQ(sign)
        seen_factor = False
        if self.peek()[0] == 'num':
            numerator = int(self.take()[1])
            denominator = 1
            if self.peek() == ('op', '/'):
                self.take()
                kind, value = self.take()
                if kind != 'num' or int(value) == 0:
                    self.fail("expected a positive denominator")
                denominator = int(value)
            coeff = coeff * QQ(numerator, denominator)
            seen_factor = True
        powers: Dict[str, int] = {}
        while True:
            kind, value = self.peek()
            if (kind, value) == ('op', '*'):
                if self.peek(1)[0] != 'atom':
                    self.fail("expected a variable after '*'")
                self.take()
                continue
            if kind != 'atom':
                break
            self.take()
            exponent = 1
            if self.peek() == ('op', '^'):
                self.take()
                exponent = self.read_exponent()
            powers[value] = powers.get(value, 0) + exponent
            seen_factor = True
        if not seen_factor:
            self.fail("empty term")
        return coeff, powers

    def read_all(self) -> List[Term]:
        if not self.tokens:
            self.fail("empty polynomial")
        terms = []
        sign = 1
        if self.peek()[0] == 'op' and self.peek()[1] in '+-':
            sign = -1 if self.take()[1] == '-' else 1
        terms.append(self.read_term(sign))
        while self.peek()[0] != 'end':
            kind, value = self.take()
            if kind != 'op' or value not in '+-':
                self.fail(f"expected '+' or '-' before {value!r}")
            terms.append(self.read_term(-1 if value == '-' else 1))
        return terms


def parse_terms(text: str) -> List[Term]:
    """Split text into ``(coefficient, {atom: exponent})`` terms without interpreting atoms"""
    if not isinstance(text, str):
        raise PolyParseError(f"expected text, got {type(text).__name__}")
    return _TermReader(text).read_all()


def parse_poly(text: str, variables: Sequence[str] = ('x', 'y')) -> LaurentPoly:
    """
    Parse polynomial text into a LaurentPoly

    Args:
        text: Polynomial in the text grammar, e.g. ``"x^3*y + 1/2*x"``
        variables: Names of the first (invertible) and second variable

    Returns:
        The parsed polynomial
    """
    slots = {name: slot for slot, name in enumerate(variables)}
    result: Dict[Tuple[int, int], Rational] = {}
    for coeff, powers in parse_terms(text):
        exponent = [0, 0]
        for name, power in powers.items():
            if name not in slots:
                raise PolyParseError(f"unknown variable {name!r} in {text!r}; expected {', '.join(variables)}")
            if power < 0 and slots[name] != 0:
                raise PolyParseError(f"negative exponent on {name!r} in {text!r}")
            exponent[slots[name]] += power
        key = (exponent[0], exponent[1])
        result[key] = result.get(key, QQ(0)) + coeff
    return LaurentPoly(result)
