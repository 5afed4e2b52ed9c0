"""
Divisor-class arithmetic on Hirzebruch surfaces F_n.

Pic(F_n) is the lattice Z*C0 + Z*F with C0^2 = -n, F^2 = 0, C0.F = 1. An ample
section S with S^2 = s2 has class C0 + (s2 + n)/2 * F, and Pic(F_n minus S) is
Z*[F|] with a class aC0 + bF restricting to b - a(s2 + n)/2.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from algebra.errors import InvalidSection, MismatchedSurface, PreconditionError

logger = logging.getLogger(__name__)


def gram_matrix(n: int) -> np.ndarray:
    """Intersection form on the basis (C0, F); object dtype keeps Python-int precision"""
    return np.array([[-n, 1], [1, 0]], dtype=object)


@dataclass(frozen=True)
class HirzebruchClass:
    n: int
    a: int
    b: int

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError(f"Hirzebruch index must be >= 0, got {self.n}")

    @classmethod
    def c0(cls, n: int) -> 'HirzebruchClass':
        return cls(n, 1, 0)

    @classmethod
    def fiber(cls, n: int) -> 'HirzebruchClass':
        return cls(n, 0, 1)

    @classmethod
    def zero(cls, n: int) -> 'HirzebruchClass':
        return cls(n, 0, 0)

    def _check_same(self, other: 'HirzebruchClass'):
        if not isinstance(other, HirzebruchClass):
            raise TypeError(f"expected a HirzebruchClass, got {type(other).__name__}")
        if other.n != self.n:
            raise MismatchedSurface(f"classes on F_{self.n} and F_{other.n} cannot be combined")

    def __add__(self, other: 'HirzebruchClass') -> 'HirzebruchClass':
        self._check_same(other)
        return HirzebruchClass(self.n, self.a + other.a, self.b + other.b)

    def __sub__(self, other: 'HirzebruchClass') -> 'HirzebruchClass':
        self._check_same(other)
        return HirzebruchClass(self.n, self.a - other.a, self.b - other.b)

    def __neg__(self) -> 'HirzebruchClass':
        return HirzebruchClass(self.n, -self.a, -self.b)

    def __mul__(self, k: int) -> 'HirzebruchClass':
        return HirzebruchClass(self.n, k * self.a, k * self.b)

    __rmul__ = __mul__

    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=object)

    def to_dict(self) -> Dict[str, int]:
        return {'n': self.n, 'a': self.a, 'b': self.b}

    @classmethod
    def from_dict(cls, data: Dict) -> 'HirzebruchClass':
        return cls(int(data['n']), int(data['a']), int(data['b']))

    def __str__(self) -> str:
        return f"{self.a}*C0 + {self.b}*F on F_{self.n}"


class _ZeroPullback:
    """Pullback of the canonical class of the affine plane, which is trivial"""

    def __repr__(self) -> str:
        return 'ZERO_CLASS'


ZERO_CLASS = _ZeroPullback()


@dataclass(frozen=True)
class SectionData:
    n: int
    s2: int

    def __post_init__(self):
        problems = []
        if self.n < 0:
            problems.append(f"n = {self.n} is negative")
        if self.s2 < self.n + 2:
            problems.append(f"S^2 = {self.s2} < n + 2 = {self.n + 2} (not ample)")
        if (self.s2 + self.n) % 2:
            problems.append(f"S^2 + n = {self.s2 + self.n} is odd")
        if problems:
            raise InvalidSection('; '.join(problems))

    def to_dict(self) -> Dict[str, int]:
        return {'n': self.n, 's2': self.s2}

    @classmethod
    def from_dict(cls, data: Dict) -> 'SectionData':
        return cls(int(data['n']), int(data['s2']))


def intersect(c1: HirzebruchClass, c2: HirzebruchClass) -> int:
    """``-n*a1*a2 + a1*b2 + a2*b1``"""
    c1._check_same(c2)
    return int(c1.vector() @ gram_matrix(c1.n) @ c2.vector())


def canonical_class(n: int) -> HirzebruchClass:
    """``K = -2*C0 - (n + 2)*F``"""
    return HirzebruchClass(n, -2, -(n + 2))


def section_class(sd: SectionData) -> HirzebruchClass:
    return HirzebruchClass(sd.n, 1, (sd.s2 + sd.n) // 2)


def canonical_via_section(sd: SectionData) -> HirzebruchClass:
    """``K = -2*S + (S^2 - 2)*F``; agrees with ``canonical_class(n)``"""
    return -2 * section_class(sd) + HirzebruchClass.fiber(sd.n) * (sd.s2 - 2)


def restrict_to_complement(sd: SectionData, divisor: HirzebruchClass) -> int:
    """Coefficient of ``[F|]`` for the image of ``divisor`` in Pic(F_n minus S)"""
    if divisor.n != sd.n:
        raise MismatchedSurface(f"class on F_{divisor.n} restricted to a section of F_{sd.n}")
    return divisor.b - divisor.a * (sd.s2 + sd.n) // 2


def wright_generator_count(sd: SectionData) -> int:
    """Generators ``t_0..t_m`` of the coordinate ring, with ``m = S^2``"""
    return sd.s2 + 1


def ramification_canonical(pullback_k, ramification: HirzebruchClass) -> HirzebruchClass:
    """``K = h^*(K_plane) + R``; pass ``ZERO_CLASS`` for the trivial pullback"""
    if pullback_k is ZERO_CLASS:
        return ramification
    if ramification is ZERO_CLASS:
        return pullback_k
    return pullback_k + ramification


@dataclass
class GeneratorConditionReport:
    index: int
    witnesses: List[Tuple[int, int]]
    excluded: List[Tuple[int, str]]

    @property
    def exclusion_fires(self) -> bool:
        return len(self.excluded) > 0

    def to_dict(self) -> Dict:
        return {
            'index': self.index,
            'witnesses': [{'n': n, 's2': s2} for n, s2 in self.witnesses],
            'excluded': [{'n': n, 'reason': reason} for n, reason in self.excluded],
        }


def _solve_restriction(target: int, max_n: int) -> Tuple[Optional[int], List[Tuple[int, int]], List[Tuple[int, str]]]:
    """Find the S^2 with ``K|`` equal to ``target * [F|]`` over n = 0..max_n"""
    s2 = target + 2
    witnesses, excluded = [], []
    for n in range(max_n + 1):
        try:
            sd = SectionData(n, s2)
        except InvalidSection as e:
            excluded.append((n, str(e)))
            continue
        if restrict_to_complement(sd, canonical_class(n)) == target:
            witnesses.append((n, s2))
    return (s2 if witnesses else None), witnesses, excluded


def generator_condition_report(max_n: int = 10) -> GeneratorConditionReport:
    """
    The index forced by ``K| = [F|]``

    ``K|`` equals ``(S^2 - 2)*[F|]``. The ``+1`` orientation gives ``S^2 = 3``; the
    ``-1`` orientation would need ``S^2 = 1 < n + 2`` and is rejected for every n.
    """
    index, witnesses, _ = _solve_restriction(1, max_n)
    flipped, _, excluded = _solve_restriction(-1, max_n)
    if flipped is not None:
        raise RuntimeError(f"S^2 = {flipped} unexpectedly satisfies the flipped condition")
    logger.debug(f"Generator condition forces S^2 = {index}; flipped sign excluded for n <= {max_n}")
    return GeneratorConditionReport(index, witnesses, excluded)


def dg_index_from_generator_condition(max_n: int = 10) -> int:
    return generator_condition_report(max_n).index
