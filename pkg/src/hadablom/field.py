"""Arithmetic and linear algebra over the prime field GF(q).

Matrices are 2-D numpy integer arrays holding least nonnegative residues.
Products fall back to Python integers (object dtype) whenever an int64
accumulator could overflow.
"""

from __future__ import annotations

import math

import numpy as np

_INT64_MAX = np.iinfo(np.int64).max


class NonInvertibleError(ZeroDivisionError):
    """Raised when inverting zero in GF(q)."""


def is_prime(n: int) -> bool:
    """Deterministic trial division; fine for moduli up to ~10**12."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def check_prime(q: int) -> int:
    if not isinstance(q, (int, np.integer)) or isinstance(q, bool):
        raise TypeError(f"modulus must be an integer, got {type(q).__name__}")
    q = int(q)
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime (composite modulus)")
    return q


def inv(a: int, q: int) -> int:
    a = int(a) % q
    if a == 0:
        raise NonInvertibleError(f"0 has no inverse mod {q}")
    return pow(a, q - 2, q)


def _safe_dtype(q: int, inner: int):
    # largest possible accumulator is (q-1)^2 * inner
    if (q - 1) ** 2 * max(inner, 1) <= _INT64_MAX:
        return np.int64
    return object


def as_matrix(M, q: int) -> np.ndarray:
    """Coerce ``M`` to a 2-D array of residues mod ``q``."""
    arr = np.array(M, dtype=object if q > 2**31 else np.int64)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr % q


def as_vector(v, q: int) -> np.ndarray:
    arr = np.array(v, dtype=object if q > 2**31 else np.int64).reshape(-1)
    return arr % q


def mat_mul(A, B, q: int) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or B.ndim != 2:
        raise ValueError("mat_mul expects 2-D matrices")
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} x {B.shape}")
    dtype = _safe_dtype(q, A.shape[1])
    out = (A.astype(dtype) @ B.astype(dtype)) % q
    return out.astype(np.int64) if dtype is not object and q <= 2**31 else out


def dot(u, v, q: int) -> int:
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum(int(a) * int(b) for a, b in zip(u, v)) % q


def rref(M, q: int) -> tuple[np.ndarray, list[int], np.ndarray]:
    """Reduced row echelon form of ``M`` over GF(q).

    Returns ``(R, pivots, T)`` with ``R = T @ M (mod q)``.  The first
    ``len(pivots)`` rows of ``R`` are nonzero and have a leading one in the
    listed pivot columns.  Pivot selection is first-nonzero, top to bottom.
    """
    R = np.asarray(M).astype(object) % q
    rows, cols = R.shape
    T = np.identity(rows, dtype=object)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if R[i, c] != 0]
        if not nz:
            continue
        p = nz[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
            T[[r, p]] = T[[p, r]]
        f = inv(R[r, c], q)
        R[r] = (R[r] * f) % q
        T[r] = (T[r] * f) % q
        for i in range(rows):
            if i != r and R[i, c] != 0:
                g = R[i, c]
                R[i] = (R[i] - g * R[r]) % q
                T[i] = (T[i] - g * T[r]) % q
        pivots.append(c)
        r += 1
    return R.astype(np.int64), pivots, T.astype(np.int64)


def rank(M, q: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, q)[1])


class RowSpace:
    """Row space of a fixed matrix, reduced once and queried many times."""

    def __init__(self, M, q: int, ncols: int | None = None):
        M = np.asarray(M, dtype=np.int64)
        if M.ndim != 2:
            M = M.reshape(0, ncols if ncols is not None else 0)
        self.q = q
        self.nrows, self.ncols = M.shape
        R, self.pivots, T = rref(M, q)
        k = len(self.pivots)
        self.basis = R[:k]
        self.transform = T[:k]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def express(self, target) -> np.ndarray | None:
        """Coefficients ``x`` over the original rows with ``x @ M == target``, or None."""
        t = as_vector(target, self.q)
        if t.shape[0] != self.ncols:
            raise ValueError(f"target has length {t.shape[0]}, expected {self.ncols}")
        coef = np.array([t[c] for c in self.pivots], dtype=np.int64)
        if self.dim:
            residual = (t - coef @ self.basis) % self.q
        else:
            residual = t
        if np.any(residual):
            return None
        if not self.dim:
            return np.zeros(self.nrows, dtype=np.int64)
        combo = (coef.astype(object) @ self.transform.astype(object)) % self.q
        return combo.astype(np.int64)

    def contains(self, target) -> bool:
        return self.express(target) is not None


def in_row_space(constraints, target, q: int) -> tuple[bool, np.ndarray | None]:
    t = as_vector(target, q)
    C = np.asarray(constraints, dtype=np.int64)
    if C.size == 0:
        C = C.reshape(0, t.shape[0])
    if C.shape[1] != t.shape[0]:
        raise ValueError(f"target has length {t.shape[0]}, constraints have {C.shape[1]} columns")
    coef = RowSpace(C, q).express(t)
    return coef is not None, coef
