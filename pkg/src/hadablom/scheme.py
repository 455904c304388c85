"""Authority and node roles for classic and Hadamard-modified Blom schemes.

The authority picks a public m x N matrix P and a secret symmetric m x m
matrix S, and hands node i row i of A = (S P)^T.  Nodes i and j agree on
K_ij = A_i . P_j = P_i^T S P_j, which is symmetric because S is.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Sequence

import numpy as np

from hadablom import docio
from hadablom.field import as_matrix, check_prime, dot, mat_mul
from hadablom.matrices import (
    VandermondeSpec,
    hadamard_column,
    hadamard_public_matrix,
    next_power_of_two,
    vandermonde,
)
from hadablom.rng import SplitMix64

CLASSIC = "classic-vandermonde"
MODIFIED = "modified-hadamard"
VARIANTS = (CLASSIC, MODIFIED)


class ConsistencyError(RuntimeError):
    """Two derivations that must agree did not."""


def m_from_t(t: int, blom_strict: bool = False) -> int:
    """Row count for security parameter ``t``.

    The worked example builds a t-row public matrix (m = t); classic Blom uses
    t+1 rows.  ``blom_strict`` selects the latter.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    return t + 1 if blom_strict else t


@dataclass(frozen=True)
class SchemeParams:
    variant: str
    N: int
    m: int
    q: int
    seed: int = 0

    def validate(self) -> "SchemeParams":
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        check_prime(self.q)
        if self.N < 1:
            raise ValueError(f"network size N={self.N} must be positive")
        if self.q <= self.N:
            raise ValueError(f"prime too small: q={self.q} must exceed N={self.N}")
        if not 1 <= self.m <= self.N:
            raise ValueError(f"row count m={self.m} must lie in [1, N={self.N}]")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed {self.seed} is not a 64-bit unsigned integer")
        return self

    @property
    def order(self) -> int:
        """Sylvester order backing the modified variant."""
        return next_power_of_two(self.N)

    @property
    def key_bits(self) -> int:
        return (self.q - 1).bit_length()

    @classmethod
    def from_t(cls, variant: str, N: int, t: int, q: int, seed: int = 0,
               blom_strict: bool = False) -> "SchemeParams":
        return cls(variant, N, m_from_t(t, blom_strict), q, seed)


@dataclass(frozen=True)
class NodeShare:
    index: int
    private_row: tuple[int, ...]


@dataclass(frozen=True)
class PairwiseKey:
    i: int
    j: int
    value: int


@dataclass(frozen=True, eq=False)
class Network:
    params: SchemeParams
    shares: tuple[NodeShare, ...]
    stored_public: np.ndarray | None = field(default=None, repr=False)
    secret: np.ndarray | None = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return self.params.N

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def variant(self) -> str:
        return self.params.variant

    @property
    def public_matrix(self) -> np.ndarray:
        """The full m x N public matrix (synthesized for the Hadamard variant)."""
        if self.variant == MODIFIED:
            return hadamard_public_matrix(self.N, self.m, self.q)
        return self.stored_public

    @property
    def private_rows(self) -> np.ndarray:
        return np.array([s.private_row for s in self.shares], dtype=np.int64).reshape(self.N, self.m)

    def share(self, i: int) -> NodeShare:
        self._check_id(i)
        return self.shares[i - 1]

    def peer_column(self, j: int) -> list[int]:
        """Public column of node ``j`` as the peer sees it.

        Hadamard columns are recomputed from the index alone.
        """
        self._check_id(j)
        if self.variant == MODIFIED:
            return hadamard_column(self.params.order, j, self.m, self.q)
        return [int(x) for x in self.stored_public[:, j - 1]]

    def _check_id(self, i: int) -> None:
        if not 1 <= i <= self.N:
            raise IndexError(f"node id {i} out of range 1..{self.N}")

    def to_dict(self, include_secret: bool = True) -> dict:
        doc = {
            "variant": self.variant,
            "N": self.N,
            "m": self.m,
            "q": self.q,
            "seed": self.params.seed,
        }
        if self.variant == CLASSIC:
            doc["public_matrix"] = _rows(self.stored_public)
        doc["shares"] = [{"index": s.index, "row": list(s.private_row)} for s in self.shares]
        if include_secret and self.secret is not None:
            doc["secret"] = _rows(self.secret)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "Network":
        params = SchemeParams(doc["variant"], int(doc["N"]), int(doc["m"]), int(doc["q"]),
                              int(doc.get("seed", 0))).validate()
        q = params.q
        shares = []
        for k, entry in enumerate(doc["shares"], start=1):
            row = tuple(int(x) for x in entry["row"])
            if int(entry["index"]) != k:
                raise ValueError(f"share {k} has index {entry['index']}; shares must be ordered 1..N")
            if len(row) != params.m or any(not 0 <= x < q for x in row):
                raise ValueError(f"share {k} is not a length-{params.m} vector of residues mod {q}")
            shares.append(NodeShare(k, row))
        if len(shares) != params.N:
            raise ValueError(f"expected {params.N} shares, got {len(shares)}")
        stored = None
        if params.variant == CLASSIC:
            if "public_matrix" not in doc:
                raise ValueError("classic-vandermonde network requires public_matrix")
            stored = as_matrix(doc["public_matrix"], q)
            if stored.shape != (params.m, params.N):
                raise ValueError(f"public_matrix shape {stored.shape} != ({params.m}, {params.N})")
        secret = None
        if doc.get("secret") is not None:
            secret = _check_secret(doc["secret"], params.m, q)
        net = cls(params, tuple(shares), stored, secret)
        if secret is not None:
            A = compute_private_rows(secret, net.public_matrix, q)
            if not np.array_equal(A, net.private_rows):
                raise ConsistencyError("shares do not match (S P)^T for the stored secret")
        return net

    def dumps(self, include_secret: bool = True) -> str:
        return docio.dumps(self.to_dict(include_secret))

    @classmethod
    def loads(cls, text: str) -> "Network":
        return cls.from_dict(docio.loads(text))


def _rows(M) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(M)]


def _check_secret(S, m: int, q: int) -> np.ndarray:
    S = as_matrix(S, q)
    if S.shape != (m, m):
        raise ValueError(f"secret must be {m}x{m}, got {S.shape}")
    if not np.array_equal(S, S.T):
        raise ValueError("secret matrix must be symmetric")
    return S


def is_symmetric(S) -> bool:
    S = np.asarray(S)
    return S.ndim == 2 and S.shape[0] == S.shape[1] and np.array_equal(S, S.T)


def generate_secret(params: SchemeParams, rng_seed: int | None = None) -> np.ndarray:
    """Symmetric m x m matrix with uniform entries in [0, q).

    Upper-triangle entries (a <= b) are drawn in row-major order and mirrored.
    """
    seed = params.seed if rng_seed is None else rng_seed
    rng = SplitMix64(seed)
    m, q = params.m, params.q
    S = np.zeros((m, m), dtype=np.int64)
    for a in range(m):
        for b in range(a, m):
            S[a, b] = S[b, a] = rng.below(q)
    return S


def compute_private_rows(S, P, q: int) -> np.ndarray:
    """A = (S P)^T, one row per node."""
    S = np.asarray(S)
    P = np.asarray(P)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"secret must be square, got shape {S.shape}")
    if not is_symmetric(S % q):
        raise ValueError("secret matrix must be symmetric")
    return mat_mul(S % q, P, q).T.copy()


def build_public_matrix(params: SchemeParams, points: Sequence[int] | None = None) -> np.ndarray:
    if params.variant == CLASSIC:
        if points is None:
            return vandermonde(VandermondeSpec.default(params.N, params.m, params.q))
        if len(points) != params.N:
            raise ValueError(f"need {params.N} Vandermonde points, got {len(points)}")
        return vandermonde(VandermondeSpec(tuple(points), params.m, params.q))
    if points is not None:
        raise ValueError("points only apply to the classic-vandermonde variant")
    return hadamard_public_matrix(params.N, params.m, params.q)


def provision(params: SchemeParams, secret=None, points: Sequence[int] | None = None) -> Network:
    """Build P, draw S (unless given), and hand row i of A to node i.

    ``points`` overrides the default Vandermonde points 1..N.
    """
    params.validate()
    q = params.q
    P = build_public_matrix(params, points)
    S = generate_secret(params) if secret is None else _check_secret(secret, params.m, q)
    A = compute_private_rows(S, P, q)
    shares = tuple(NodeShare(i + 1, tuple(int(x) for x in A[i])) for i in range(params.N))
    stored = P if params.variant == CLASSIC else None
    return Network(params, shares, stored, S)


def redact(network: Network) -> Network:
    """Copy of ``network`` without the authority's secret."""
    return replace(network, secret=None)


def derive_key(share: NodeShare, peer_column: Sequence[int], q: int) -> int:
    if len(share.private_row) != len(peer_column):
        raise ValueError(
            f"private row has length {len(share.private_row)}, peer column {len(peer_column)}")
    return dot(share.private_row, peer_column, q)


def establish(network: Network, i: int, j: int) -> PairwiseKey:
    """Both directions of the pairwise exchange; raises if they disagree."""
    q = network.q
    k_ij = derive_key(network.share(i), network.peer_column(j), q)
    k_ji = derive_key(network.share(j), network.peer_column(i), q)
    if k_ij != k_ji:
        raise ConsistencyError(f"K[{i},{j}]={k_ij} but K[{j},{i}]={k_ji}")
    return PairwiseKey(i, j, k_ij)


def full_key_matrix(network: Network) -> np.ndarray:
    return mat_mul(network.private_rows, network.public_matrix, network.q)


def worked_example_network() -> Network:
    """The worked N=8, m=6, q=31 Hadamard example with its hand-picked secret."""
    text = resources.files("hadablom.data").joinpath("worked_example.json").read_text()
    return Network.loads(text)
