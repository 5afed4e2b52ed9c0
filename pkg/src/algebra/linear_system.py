"""Exact linear algebra over QQ on top of sympy's DomainMatrix."""

import logging
from typing import Hashable, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from algebra.laurent_poly import Rational

logger = logging.getLogger(__name__)


def rref(rows: Sequence[Sequence[Rational]], ncols: int) -> Tuple[List[List[Rational]], Tuple[int, ...]]:
    """
    Reduced row echelon form of a dense rational matrix

    Args:
        rows: Matrix rows, each of length ``ncols``
        ncols: Number of columns

    Returns:
        Tuple of (rref rows, pivot column indices); zero rows are dropped
    """
    if not rows or ncols == 0:
        return [], ()
    matrix = DomainMatrix([[QQ.convert(value) for value in row] for row in rows], (len(rows), ncols), QQ)
    reduced, pivots = matrix.rref()
    reduced_rows = reduced.to_list()
    return [list(reduced_rows[i]) for i in range(len(pivots))], tuple(pivots)


def solve_basic(columns: Sequence[Mapping[Hashable, Rational]],
                target: Mapping[Hashable, Rational]) -> Optional[List[Rational]]:
    """
    Solve ``sum_i u_i * columns[i] = target`` exactly

    Vectors are sparse maps from a coordinate key (e.g. an exponent pair) to a
    coefficient. The returned solution is the basic one: free unknowns are zero and
    pivots sit at the earliest possible columns, so earlier columns are preferred.

    Returns:
        The coefficient list, or ``None`` when the system is inconsistent
    """
    n = len(columns)
    keys = set(target)
    for column in columns:
        keys.update(column)
    if not keys:
        return [QQ(0)] * n
    ordered_keys = sorted(keys)
    rows = [[column.get(key, QQ(0)) for column in columns] + [target.get(key, QQ(0))]
            for key in ordered_keys]
    reduced, pivots = rref(rows, n + 1)
    if pivots and pivots[-1] == n:
        return None
    solution = [QQ(0)] * n
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row[n]
    logger.debug(f"Solved {len(ordered_keys)}x{n} system with rank {len(pivots)}")
    return solution


def row_basis(vectors: Sequence[Mapping[Hashable, Rational]],
              coordinates: Sequence[Hashable]) -> Tuple[List[List[Rational]], Tuple[int, ...]]:
    """RREF basis of the span of sparse vectors, columns laid out in ``coordinates`` order"""
    rows = [[vector.get(key, QQ(0)) for key in coordinates] for vector in vectors]
    return rref(rows, len(coordinates))
