"""
Bounded search for constant-Jacobian pairs inside a Wright algebra.

Expressions are coefficient vectors over the non-constant T-monomials of degree
``1..t_degree_bound``; the constant monomial is left out because it never changes
a Jacobian. The vector ``c`` of ``p`` is enumerated in ``itertools.product`` order
over the coefficient set and its index is both the resume cursor and the
partition key. For each ``c`` the q-side condition is linear, so a modular rank
test discards most ``c`` and the rest are solved exactly over QQ.
"""

import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import lcm
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sympy.polys.domains import QQ

from algebra.errors import CheckpointError, InvalidAlgebra, InvalidSearchSpace, NotAMember
from algebra.laurent_poly import (
    LaurentPoly,
    Rational,
    format_rational,
    is_regular_in,
    jacobian_determinant,
    to_rational,
)
from algebra.linear_system import rref
from analysis.modular_filter import ModularPrefilter
from models.generator_expression import (
    GeneratorExpression,
    Monomial,
    monomial_values,
    monomials_up_to,
    parse_generator_expression,
)
from models.wright_algebra import (
    CanonicalIndex3Algebra,
    WrightAlgebra,
    as_wright,
    canonical_from_wright,
    is_member,
)

logger = logging.getLogger(__name__)

MAX_SPACE_SIZE = 2 ** 62
MAX_VIOLATION_SAMPLES = 20
# dot products of a table row with a coefficient vector must stay below this
INT64_SAFE = 2 ** 62


class PairCheck(NamedTuple):
    jacobian: LaurentPoly
    constant_nonzero: bool


def etale_pair_check(p: LaurentPoly, q: LaurentPoly) -> PairCheck:
    jacobian = jacobian_determinant(p, q)
    return PairCheck(jacobian, jacobian.is_constant() and not jacobian.is_zero())


def necessary_condition_filter(algebra: CanonicalIndex3Algebra, p: LaurentPoly) -> bool:
    """True iff the member ``p`` is not regular in both variables (constants pass)"""
    if not is_member(algebra, p):
        raise NotAMember(f"{p} is not in {algebra.describe()}")
    if p.is_constant():
        return True
    return not (is_regular_in(p, 'x') and is_regular_in(p, 'y'))


@dataclass(frozen=True)
class SearchSpace:
    algebra: WrightAlgebra
    t_degree_bound: int
    coefficient_set: Tuple[Rational, ...]

    def __post_init__(self):
        object.__setattr__(self, 'algebra', as_wright(self.algebra))
        object.__setattr__(self, 'coefficient_set', tuple(to_rational(c) for c in self.coefficient_set))
        if self.t_degree_bound < 1:
            raise InvalidSearchSpace(f"t_degree_bound must be >= 1, got {self.t_degree_bound}")
        if not self.coefficient_set:
            raise InvalidSearchSpace("coefficient set is empty")
        if 0 not in self.coefficient_set:
            raise InvalidSearchSpace("coefficient set must contain 0")
        if len(set(self.coefficient_set)) != len(self.coefficient_set):
            raise InvalidSearchSpace("coefficient set has repeated values")
        if self.size >= MAX_SPACE_SIZE:
            raise InvalidSearchSpace(f"{self.size} expressions is beyond the enumeration range")

    @property
    def monomials(self) -> List[Monomial]:
        return monomials_up_to(self.algebra.m + 1, self.t_degree_bound, include_constant=False)

    @property
    def size(self) -> int:
        """Number of expressions; the number of ordered pairs is its square"""
        return len(self.coefficient_set) ** len(self.monomials)

    def to_dict(self) -> Dict:
        return {
            'algebra': self.algebra.to_dict(),
            't_degree_bound': self.t_degree_bound,
            'coefficients': [format_rational(c) for c in self.coefficient_set],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'SearchSpace':
        return cls(WrightAlgebra.from_dict(data['algebra']), int(data['t_degree_bound']),
                   tuple(to_rational(c) for c in data['coefficients']))


@dataclass
class EtaleCandidate:
    p_expr: GeneratorExpression
    q_expr: GeneratorExpression
    jacobian: LaurentPoly
    p_index: int = -1
    q_index: int = -1

    def to_dict(self) -> Dict:
        return {
            'p': self.p_expr.to_text(),
            'q': self.q_expr.to_text(),
            'jacobian': self.jacobian.to_text(),
            'p_index': self.p_index,
            'q_index': self.q_index,
        }

    @classmethod
    def from_dict(cls, data: Dict, symbols: Sequence[str], images: Sequence[LaurentPoly]) -> 'EtaleCandidate':
        p_expr = parse_generator_expression(data['p'], symbols)
        q_expr = parse_generator_expression(data['q'], symbols)
        check = etale_pair_check(p_expr.evaluate(images), q_expr.evaluate(images))
        if not check.constant_nonzero:
            raise ValueError(f"stored pair ({p_expr}, {q_expr}) does not re-verify")
        return cls(p_expr, q_expr, check.jacobian, int(data['p_index']), int(data['q_index']))


@dataclass
class SearchReport:
    space: SearchSpace
    candidates: List[EtaleCandidate] = field(default_factory=list)
    enumerated: int = 0
    prefilter_survivors: int = 0
    members_checked: int = 0
    violations: List[str] = field(default_factory=list)
    violation_count: int = 0
    elapsed: float = 0.0
    completed: bool = False
    prefilter: Optional[str] = None

    @property
    def counterexample(self) -> bool:
        """A candidate in the canonical index-3 algebra would settle an open case"""
        if not self.candidates:
            return False
        try:
            canonical_from_wright(self.space.algebra)
        except InvalidAlgebra:
            return False
        return True

    def stats(self) -> Dict:
        return {
            'enumerated': self.enumerated,
            'prefilter_survivors': self.prefilter_survivors,
            'members_checked': self.members_checked,
            'violation_count': self.violation_count,
            'violations': self.violations,
        }

    def to_dict(self) -> Dict:
        return {
            'space': self.space.to_dict(),
            'expressions': self.space.size,
            'completed': self.completed,
            'candidates': [c.to_dict() for c in self.candidates],
            'counterexample': self.counterexample,
            **self.stats(),
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([c.to_dict() for c in self.candidates],
                            columns=['p', 'q', 'jacobian', 'p_index', 'q_index'])


@dataclass
class _ChunkResult:
    start: int
    stop: int
    candidates: List[EtaleCandidate]
    survivors: int
    members_checked: int
    violations: List[str]
    violation_count: int


def _denominator_lcm(values) -> int:
    result = 1
    for value in values:
        result = lcm(result, int(to_rational(value).denominator))
    return result


def _scaled_int(value: Rational, scale: int) -> int:
    scaled = to_rational(value) * scale
    if scaled.denominator != 1:
        raise ValueError(f"{value} * {scale} is not an integer")
    return int(scaled.numerator)


class EtaleSearch:
    """
    Exhaustive constant-Jacobian search over a SearchSpace.

    Args:
        space: Algebra, T-degree bound and coefficient set
        workers: Threads processing chunks; output order never depends on it
        chunk_size: Coefficient vectors per chunk
        use_prefilter: Run the modular rank test before exact solving
        generators: Images for the symbols; defaults to the algebra's generators
    """

    def __init__(self, space: SearchSpace, workers: int = 1, chunk_size: int = 4096,
                 use_prefilter: bool = True, generators: Optional[Sequence[LaurentPoly]] = None):
        self.logger = logging.getLogger(__name__)
        self.space = space
        self.workers = max(1, int(workers))
        self.chunk_size = max(1, int(chunk_size))
        self.images = list(generators) if generators is not None else space.algebra.generators
        self.symbols = space.algebra.symbols
        if len(self.images) != len(self.symbols):
            raise InvalidSearchSpace(f"expected {len(self.symbols)} generator images, got {len(self.images)}")

        self.monomials = space.monomials
        self.size = len(self.monomials)
        values = monomial_values(self.monomials, self.images)
        self.values = [values[mono] for mono in self.monomials]

        self.coefficients = list(space.coefficient_set)
        self.coefficient_index = {c: k for k, c in enumerate(self.coefficients)}
        coefficient_scale = _denominator_lcm(self.coefficients)
        scaled_coefficients = [_scaled_int(c, coefficient_scale) for c in self.coefficients]
        self.coefficient_bound = max(abs(v) for v in scaled_coefficients)
        self._require_int64("scaled coefficient", 1)
        self.scaled_coefficients = np.array(scaled_coefficients, dtype=np.int64)
        self.radix = len(self.coefficients)
        self.powers = np.array([self.radix ** (self.size - 1 - i) for i in range(self.size)], dtype=np.int64)

        self._build_jacobian_tables()
        self.prefilter = None
        if use_prefilter:
            self.prefilter = ModularPrefilter(self.nonconstant, self.constant, self.coefficient_bound)
        self.screen = self._build_regularity_screen()

    def _require_int64(self, what: str, entry_bound: int):
        """Reject spaces whose vectorised dot products would leave int64"""
        if self.size * self.coefficient_bound * entry_bound >= INT64_SAFE:
            raise InvalidSearchSpace(
                f"{what} entries up to {entry_bound} with coefficients up to {self.coefficient_bound} "
                f"overflow 64-bit search arithmetic; use smaller alphas or coefficients")

    def _build_jacobian_tables(self):
        n = self.size
        jacobians = [[jacobian_determinant(self.values[i], self.values[j]) for j in range(n)] for i in range(n)]
        keys = sorted({key for row in jacobians for jac in row for key, _ in jac.terms()} - {(0, 0)})
        scale = _denominator_lcm(c for row in jacobians for jac in row for _, c in jac.terms())
        entries = [(i, j, key, _scaled_int(coeff, scale))
                   for i in range(n) for j in range(n) for key, coeff in jacobians[i][j].terms()]
        self._require_int64("Jacobian table", max((abs(value) for *_, value in entries), default=0))

        key_index = {key: k for k, key in enumerate(keys)}
        self.nonconstant = np.zeros((len(keys), n, n), dtype=np.int64)
        self.constant = np.zeros((n, n), dtype=np.int64)
        for i, j, key, value in entries:
            if key == (0, 0):
                self.constant[i, j] = value
            else:
                self.nonconstant[key_index[key], i, j] = value
        self.logger.debug(f"Jacobian table: {n}x{n} pairs over {len(keys)} monomials, scale {scale}")

    def _build_regularity_screen(self) -> Optional[Dict]:
        try:
            canonical_from_wright(self.space.algebra)
        except InvalidAlgebra:
            return None
        keys = sorted({key for value in self.values for key, _ in value.terms()})
        scale = _denominator_lcm(c for value in self.values for _, c in value.terms())
        entries = [(i, keys.index(key), _scaled_int(coeff, scale))
                   for i, value in enumerate(self.values) for key, coeff in value.terms()]
        self._require_int64("generator value", max((abs(value) for *_, value in entries), default=0))
        matrix = np.zeros((self.size, len(keys)), dtype=np.int64)
        for i, k, value in entries:
            matrix[i, k] = value
        degrees = np.array([ex + ey for ex, ey in keys], dtype=np.int64)
        top = int(degrees.max(initial=0))
        x_columns = np.full(top + 1, -1, dtype=np.int64)
        y_columns = np.full(top + 1, -1, dtype=np.int64)
        for k, (ex, ey) in enumerate(keys):
            if ey == 0:
                x_columns[ex] = k
            if ex == 0:
                y_columns[ey] = k
        return {'matrix': matrix, 'degrees': degrees, 'x': x_columns, 'y': y_columns}

    # Enumeration

    def _digits(self, start: int, stop: int) -> np.ndarray:
        indices = np.arange(start, stop, dtype=np.int64)
        return (indices[:, None] // self.powers[None, :]) % self.radix

    def _expression(self, digits: Sequence[int]) -> GeneratorExpression:
        return GeneratorExpression.from_vector(self.monomials, [self.coefficients[k] for k in digits], self.symbols)

    def _polynomial(self, digits: Sequence[int]) -> LaurentPoly:
        result = LaurentPoly.zero()
        for value, k in zip(self.values, digits):
            if self.coefficients[k]:
                result = result + value * self.coefficients[k]
        return result

    def _screen_members(self, start: int, digits: np.ndarray, scaled: np.ndarray) -> Tuple[int, List[str]]:
        """Vectorized non-regularity check of every enumerated p"""
        screen = self.screen
        polys = scaled @ screen['matrix']
        nonzero = polys != 0
        degree = np.where(nonzero, screen['degrees'][None, :], -1).max(axis=1)
        rows = np.nonzero(degree >= 1)[0]
        x_cols = screen['x'][degree[rows]]
        y_cols = screen['y'][degree[rows]]
        x_coef = np.where(x_cols >= 0, polys[rows, np.maximum(x_cols, 0)], 0)
        y_coef = np.where(y_cols >= 0, polys[rows, np.maximum(y_cols, 0)], 0)
        bad = rows[(x_coef != 0) & (y_coef != 0)]
        samples = []
        for b in bad[:MAX_VIOLATION_SAMPLES]:
            samples.append(self._polynomial(digits[b]).to_text())
            self.logger.error(f"Member regular in both variables at index {start + int(b)}: {samples[-1]}")
        return len(bad), samples

    def _solve_q(self, scaled_c: np.ndarray) -> List[List[Rational]]:
        """All grid vectors d with J(p, q) a nonzero constant, in product order of the free unknowns"""
        n = self.size
        ell = scaled_c @ self.constant
        if not ell.any():
            return []
        matrix = np.einsum('i,kij->kj', scaled_c, self.nonconstant)
        rows = [[QQ(int(v)) for v in row] for row in matrix if row.any()]
        reduced, pivots = rref(rows, n)
        free = [j for j in range(n) if j not in pivots]
        ell_q = [QQ(int(v)) for v in ell]
        solutions = []
        for choice in product(self.coefficients, repeat=len(free)):
            d: List[Optional[Rational]] = [None] * n
            for j, value in zip(free, choice):
                d[j] = value
            consistent = True
            for row, pivot in zip(reduced, pivots):
                value = -sum((row[f] * d[f] for f in free), QQ(0))
                if value not in self.coefficient_index:
                    consistent = False
                    break
                d[pivot] = value
            if not consistent:
                continue
            if sum((ell_q[j] * d[j] for j in range(n)), QQ(0)) == 0:
                continue
            solutions.append(d)
        return solutions

    def _process_chunk(self, bounds: Tuple[int, int]) -> _ChunkResult:
        start, stop = bounds
        digits = self._digits(start, stop)
        scaled = self.scaled_coefficients[digits]

        members_checked, violation_count, violations = 0, 0, []
        if self.screen is not None:
            members_checked = len(digits)
            violation_count, violations = self._screen_members(start, digits, scaled)

        if self.prefilter is not None:
            mask = self.prefilter.survivors(scaled)
        else:
            mask = np.ones(len(digits), dtype=bool)

        candidates = []
        for row in np.nonzero(mask)[0]:
            for d in self._solve_q(scaled[row]):
                candidates.append(self._candidate(start + int(row), digits[row], d))
        candidates.sort(key=lambda c: (c.p_index, c.q_index))
        return _ChunkResult(start, stop, candidates, int(mask.sum()), members_checked, violations, violation_count)

    def _candidate(self, p_index: int, digits: Sequence[int], d: Sequence[Rational]) -> EtaleCandidate:
        q_digits = [self.coefficient_index[value] for value in d]
        q_index = sum(k * self.radix ** (self.size - 1 - i) for i, k in enumerate(q_digits))
        p_expr = self._expression(digits)
        q_expr = self._expression(q_digits)
        check = etale_pair_check(p_expr.evaluate(self.images), q_expr.evaluate(self.images))
        if not check.constant_nonzero:
            raise RuntimeError(f"solver produced ({p_expr}, {q_expr}) with Jacobian {check.jacobian}")
        return EtaleCandidate(p_expr, q_expr, check.jacobian, p_index, q_index)

    # Driver

    def run(self, checkpoint_path: Optional[str] = None, resume: bool = False,
            stop_after: Optional[int] = None,
            on_candidate: Optional[Callable[[EtaleCandidate], None]] = None) -> SearchReport:
        """
        Enumerate the space, optionally resuming from and writing to a checkpoint

        Args:
            checkpoint_path: JSON checkpoint written after every wave of chunks
            resume: Continue from ``checkpoint_path`` when it exists
            stop_after: Stop once this many further vectors have been processed
            on_candidate: Called for each candidate in enumeration order

        Returns:
            SearchReport; ``completed`` is False when stopped early
        """
        total = self.space.size
        report = SearchReport(self.space, prefilter=self.prefilter.describe() if self.prefilter else None)
        cursor = 0
        if resume and checkpoint_path and os.path.exists(checkpoint_path):
            state = load_checkpoint(checkpoint_path, self.space, self.images)
            cursor = state['cursor']
            report.candidates = state['found']
            for key in ('enumerated', 'prefilter_survivors', 'members_checked', 'violation_count'):
                setattr(report, key, int(state['stats'].get(key, 0)))
            report.violations = list(state['stats'].get('violations', []))
            self.logger.info(f"Resuming search at {cursor}/{total}")
            if on_candidate:
                for candidate in report.candidates:
                    on_candidate(candidate)

        limit = total if stop_after is None else min(total, cursor + stop_after)
        started = time.perf_counter()
        wave = self.workers * 4
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            while cursor < limit:
                bounds = []
                position = cursor
                while position < limit and len(bounds) < wave:
                    bounds.append((position, min(position + self.chunk_size, limit)))
                    position = bounds[-1][1]
                for result in executor.map(self._process_chunk, bounds):
                    report.candidates.extend(result.candidates)
                    report.enumerated += result.stop - result.start
                    report.prefilter_survivors += result.survivors
                    report.members_checked += result.members_checked
                    report.violation_count += result.violation_count
                    report.violations.extend(result.violations[:MAX_VIOLATION_SAMPLES - len(report.violations)])
                    if on_candidate:
                        for candidate in result.candidates:
                            on_candidate(candidate)
                cursor = position
                if checkpoint_path:
                    save_checkpoint(checkpoint_path, self.space, cursor, report)
                self.logger.info(f"Processed {cursor}/{total} expressions, "
                                 f"{report.prefilter_survivors} reached the exact solver, "
                                 f"{len(report.candidates)} candidates")

        report.completed = cursor >= total
        report.elapsed = time.perf_counter() - started
        if report.completed and checkpoint_path:
            save_checkpoint(checkpoint_path, self.space, cursor, report)
        if report.counterexample:
            self.logger.critical("Constant-Jacobian pair found in the canonical index-3 algebra; "
                                 "this contradicts the open case of Wright's conjecture and needs review")
        return report


def search_etale_pairs(space: SearchSpace, workers: int = 1, chunk_size: int = 4096,
                       checkpoint_path: Optional[str] = None, resume: bool = False) -> List[EtaleCandidate]:
    """
    Every ordered pair in ``space`` with a nonzero constant Jacobian, in enumeration order

    Expressions carry no constant T-monomial, so pairs are listed only up to additive
    constants: ``(p + c, q + c2)`` has the same Jacobian as ``(p, q)`` and is not repeated.
    """
    search = EtaleSearch(space, workers=workers, chunk_size=chunk_size)
    return search.run(checkpoint_path=checkpoint_path, resume=resume).candidates


# Checkpoints

def save_checkpoint(path: str, space: SearchSpace, cursor: int, report: SearchReport) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    state = {
        'space': space.to_dict(),
        'cursor': cursor,
        'found': [c.to_dict() for c in report.candidates],
        'stats': report.stats(),
    }
    temporary = f"{path}.tmp"
    with open(temporary, 'w', encoding='utf-8') as f:
        json.dump(state, f, indent=2)
    os.replace(temporary, path)


def load_checkpoint(path: str, space: SearchSpace, images: Optional[Sequence[LaurentPoly]] = None) -> Dict:
    """Read a checkpoint written for ``space``; candidates are re-verified on load"""
    images = space.algebra.generators if images is None else images
    try:
        with open(path, 'r', encoding='utf-8') as f:
            state = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e
    if not isinstance(state, dict) or state.get('space') != space.to_dict():
        raise CheckpointError(f"checkpoint {path} was written for a different search space")
    try:
        found = [EtaleCandidate.from_dict(item, space.algebra.symbols, images) for item in state.get('found', [])]
        cursor = int(state['cursor'])
    except (KeyError, TypeError, ValueError) as e:
        raise CheckpointError(f"checkpoint {path} is malformed: {e}") from e
    if not 0 <= cursor <= space.size:
        raise CheckpointError(f"checkpoint cursor {cursor} is outside the space")
    return {'cursor': cursor, 'found': found, 'stats': state.get('stats', {})}
