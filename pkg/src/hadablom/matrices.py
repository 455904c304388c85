"""Public-matrix generators: Vandermonde and non-binary Sylvester Hadamard."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from hadablom.field import check_prime, rank


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def next_power_of_two(n: int) -> int:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return 1 << (n - 1).bit_length()


@dataclass(frozen=True)
class VandermondeSpec:
    points: tuple[int, ...]
    m: int
    q: int

    @property
    def N(self) -> int:
        return len(self.points)

    @classmethod
    def default(cls, N: int, m: int, q: int) -> "VandermondeSpec":
        """Consecutive points 1..N."""
        return cls(tuple(range(1, N + 1)), m, q)


@dataclass(frozen=True)
class HadamardSpec:
    order: int
    m: int
    q: int


def vandermonde(spec: VandermondeSpec) -> np.ndarray:
    """m x N matrix with entry (r, c) = points[c] ** r mod q (zero-based r)."""
    q = check_prime(spec.q)
    pts = [int(p) % q for p in spec.points]
    if len(set(pts)) != len(pts):
        raise ValueError("Vandermonde points must be pairwise distinct mod q")
    if 0 in pts:
        raise ValueError("Vandermonde points must be nonzero mod q")
    if not 1 <= spec.m <= len(pts):
        raise ValueError(f"row count m={spec.m} must lie in [1, N={len(pts)}]")
    P = np.empty((spec.m, len(pts)), dtype=np.int64)
    for c, x in enumerate(pts):
        P[:, c] = [pow(x, r, q) for r in range(spec.m)]
    return P


def _entry(r: int, c: int, minus_one: int) -> int:
    # zero-based indices; sign is the parity of popcount(r & c)
    return minus_one if (r & c).bit_count() & 1 else 1


def nonbinary_hadamard(spec: HadamardSpec) -> np.ndarray:
    """Full ``order x order`` Sylvester Hadamard matrix with -1 written as q-1.

    ``spec.m`` is ignored here; slice the result to truncate.
    """
    if not is_power_of_two(spec.order):
        raise ValueError(f"Hadamard order must be a power of two, got {spec.order}")
    q = check_prime(spec.q)
    idx = np.arange(spec.order)
    parity = np.zeros((spec.order, spec.order), dtype=np.int64)
    anded = idx[:, None] & idx[None, :]
    while anded.any():
        parity ^= anded & 1
        anded >>= 1
    return np.where(parity == 1, q - 1, 1).astype(np.int64)


def hadamard_column(order: int, col: int, m: int, q: int) -> list[int]:
    """Rows 1..m of column ``col`` (1-based) of the non-binary Hadamard matrix.

    Nothing is materialized beyond the m output entries.
    """
    if not is_power_of_two(order):
        raise ValueError(f"Hadamard order must be a power of two, got {order}")
    if not 1 <= col <= order:
        raise IndexError(f"column {col} out of range 1..{order}")
    if not 0 <= m <= order:
        raise ValueError(f"m={m} exceeds Hadamard order {order}")
    c = col - 1
    return [_entry(r, c, q - 1) for r in range(m)]


def hadamard_public_matrix(N: int, m: int, q: int) -> np.ndarray:
    """First m rows and N columns of the order-next_pow2(N) matrix."""
    order = next_power_of_two(N)
    if not 1 <= m <= order:
        raise ValueError(f"m={m} must lie in [1, {order}]")
    return nonbinary_hadamard(HadamardSpec(order, m, q))[:m, :N]


def columns_independent(P: np.ndarray, cols: Sequence[int], q: int) -> bool:
    """True if the chosen (zero-based) columns of P are linearly independent."""
    return rank(np.asarray(P)[:, list(cols)], q) == len(cols)
