"""
Single-prime rank test used to discard hopeless ``p`` before any exact solve.

For a fixed coefficient vector ``c`` the Jacobian ``J(p, q)`` is linear in the
q-coefficients ``d``: its non-constant part is ``A(c) d`` and its constant part
is ``l(c) . d``. A grid ``d`` with ``A(c) d = 0`` and ``l(c) . d != 0`` can only
exist when ``l(c)`` is outside the row space of ``A(c)``. The test reduces
``l(c)`` against a random row projection of ``A(c)`` modulo a prime ``P``; if it
vanishes there, every integer ``d`` in the grid has ``l . d`` divisible by ``P``,
and since ``|l . d| < P`` that means ``l . d = 0``.
"""

import logging
from typing import Optional

import numpy as np
import sympy

logger = logging.getLogger(__name__)

PRIME = int(sympy.prevprime(2 ** 31))
PROJECTION_HEIGHT = 2 ** 10


def modular_inverse(values: np.ndarray, prime: int = PRIME) -> np.ndarray:
    """Elementwise inverse modulo ``prime`` by repeated squaring (Fermat)"""
    result = np.ones_like(values)
    base = values % prime
    exponent = prime - 2
    while exponent:
        if exponent & 1:
            result = result * base % prime
        base = base * base % prime
        exponent >>= 1
    return result


class ModularPrefilter:
    """
    Batched rank test over coefficient vectors.

    Args:
        nonconstant: integer tensor ``K[k, i, j]``, the coefficient of the k-th
            non-constant monomial in ``J(v_i, v_j)`` (integer-scaled)
        constant: integer matrix ``L[i, j]``, the constant term of ``J(v_i, v_j)``
        coefficient_bound: largest ``|c_i|`` (and ``|d_j|``) of the scaled grid
        seed: seed of the projection matrix
    """

    def __init__(self, nonconstant: np.ndarray, constant: np.ndarray,
                 coefficient_bound: int, seed: int = 0, prime: int = PRIME):
        self.logger = logging.getLogger(__name__)
        self.prime = prime
        self.size = constant.shape[0]
        n = self.size
        # |l . d| <= N * max|l_j| * cmax and max|l_j| <= N * cmax * max|L|
        self.value_bound = n * n * coefficient_bound * coefficient_bound * int(np.abs(constant).max(initial=0))
        self.sound = self.value_bound < prime

        rng = np.random.default_rng(seed)
        rows = nonconstant.shape[0]
        projection = rng.integers(-PROJECTION_HEIGHT, PROJECTION_HEIGHT + 1, size=(n, rows), dtype=np.int64)
        reduced = nonconstant.astype(np.int64) % prime
        # QK[i] = Q @ K[:, i, :]
        self.projected = np.einsum('uk,kij->iuj', projection, reduced) % prime if rows else np.zeros((n, n, n), dtype=np.int64)
        self.constant = constant.astype(np.int64) % prime
        if not self.sound:
            self.logger.warning(f"Prefilter disabled: values up to {self.value_bound} exceed prime {prime}")

    def survivors(self, coefficients: np.ndarray) -> np.ndarray:
        """
        Boolean mask over a batch of scaled coefficient vectors ``(B, N)``

        True means the exact solver must look at this ``c``; False is a proof that no
        grid ``q`` gives a nonzero constant Jacobian.
        """
        if not self.sound:
            return np.ones(coefficients.shape[0], dtype=bool)
        p = self.prime
        # small signed entries keep the contractions inside int64
        c = coefficients.astype(np.int64)
        n = self.size
        batch = c.shape[0]
        system = np.empty((batch, n + 1, n), dtype=np.int64)
        system[:, :n, :] = np.einsum('bi,iuj->buj', c, self.projected) % p
        system[:, n, :] = c @ self.constant % p

        used = np.zeros((batch, n), dtype=bool)
        for j in range(n):
            candidates = (system[:, :n, j] != 0) & ~used
            has_pivot = candidates.any(axis=1)
            if not has_pivot.any():
                continue
            rows = np.nonzero(has_pivot)[0]
            pivots = candidates[rows].argmax(axis=1)
            pivot_rows = system[rows, pivots, :]
            pivot_rows = pivot_rows * modular_inverse(pivot_rows[:, j], p)[:, None] % p
            system[rows, pivots, :] = pivot_rows
            used[rows, pivots] = True

            factors = system[rows, :, j].copy()
            factors[np.arange(len(rows)), pivots] = 0
            system[rows] = (system[rows] - factors[:, :, None] * pivot_rows[:, None, :]) % p

        return (system[:, n, :] != 0).any(axis=1)

    def describe(self) -> Optional[str]:
        if not self.sound:
            return None
        return f"prime {self.prime}, projection {self.size}x{self.size}"
