"""Blom-style pairwise key predistribution over prime fields.

Two public-matrix families are supported: the classic Vandermonde matrix and a
Sylvester Hadamard matrix with -1 mapped to q-1, whose columns any node can
synthesize on demand instead of storing them.
"""

from hadablom.field import NonInvertibleError, inv, is_prime, mat_mul, rank, in_row_space
from hadablom.matrices import hadamard_column, nonbinary_hadamard, vandermonde
from hadablom.scheme import (
    CLASSIC,
    MODIFIED,
    ConsistencyError,
    Network,
    NodeShare,
    PairwiseKey,
    SchemeParams,
    compute_private_rows,
    derive_key,
    establish,
    full_key_matrix,
    generate_secret,
    worked_example_network,
    provision,
    redact,
)

__all__ = [
    "CLASSIC",
    "MODIFIED",
    "ConsistencyError",
    "Network",
    "NodeShare",
    "NonInvertibleError",
    "PairwiseKey",
    "SchemeParams",
    "compute_private_rows",
    "derive_key",
    "establish",
    "full_key_matrix",
    "generate_secret",
    "hadamard_column",
    "in_row_space",
    "inv",
    "is_prime",
    "mat_mul",
    "nonbinary_hadamard",
    "worked_example_network",
    "provision",
    "rank",
    "redact",
    "vandermonde",
]
