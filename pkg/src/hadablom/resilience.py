"""Collusion analysis: what do pooled private rows reveal about other keys?

Unknowns are the free entries S[a][b], a <= b, of the secret matrix, in
row-major order.  A compromised node c exposes row c of A, i.e. the m linear
equations sum_a S[b][a] P[a][c] = A[c][b].  A key K_ij = P_i^T S P_j is
another linear form in the same unknowns, so it is pinned down exactly when
that form lies in the row space of the pooled equations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from hadablom import docio
from hadablom.field import RowSpace, as_vector, rank
from hadablom.rng import SplitMix64
from hadablom.scheme import Network, NodeShare

BRUTE_FORCE_LIMIT = 10**7
EXHAUSTIVE_MAX_N = 16


class InconsistentSystemError(ValueError):
    """The pooled shares admit no symmetric secret."""


def unknown_pairs(m: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(m) for b in range(a, m)]


def _unknown_index(m: int) -> dict[tuple[int, int], int]:
    idx = {}
    for k, (a, b) in enumerate(unknown_pairs(m)):
        idx[a, b] = idx[b, a] = k
    return idx


def secret_to_unknowns(S) -> np.ndarray:
    S = np.asarray(S)
    return np.array([S[a, b] for a, b in unknown_pairs(S.shape[0])], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    m: int
    q: int
    rows: np.ndarray
    rhs: np.ndarray
    nodes: tuple[int, ...] = ()
    _space: list = field(default_factory=list, repr=False, compare=False)

    @property
    def unknown_count(self) -> int:
        return self.m * (self.m + 1) // 2

    def space(self) -> RowSpace:
        """Reduced row space, computed once and checked for consistency."""
        if not self._space:
            sp = RowSpace(self.rows, self.q, ncols=self.unknown_count)
            if self.rows.shape[0]:
                aug = np.hstack([self.rows, self.rhs.reshape(-1, 1)])
                if rank(aug, self.q) != sp.dim:
                    raise InconsistentSystemError("compromised shares are not jointly consistent")
            self._space.append(sp)
        return self._space[0]


def constraint_system(P, shares: Iterable[NodeShare], q: int) -> ConstraintSystem:
    P = np.asarray(P) % q
    m, N = P.shape
    shares = list(shares)
    nodes = [s.index for s in shares]
    if len(set(nodes)) != len(nodes):
        raise ValueError(f"duplicate compromised node indices: {nodes}")
    idx = _unknown_index(m)
    u = m * (m + 1) // 2
    rows = np.zeros((m * len(shares), u), dtype=np.int64)
    rhs = np.zeros(m * len(shares), dtype=np.int64)
    for n, share in enumerate(shares):
        if not 1 <= share.index <= N:
            raise IndexError(f"node id {share.index} out of range 1..{N}")
        if len(share.private_row) != m:
            raise ValueError(f"share {share.index} has length {len(share.private_row)}, expected {m}")
        col = P[:, share.index - 1]
        for b in range(m):
            r = n * m + b
            for a in range(m):
                rows[r, idx[a, b]] += col[a]
            rhs[r] = share.private_row[b] % q
    return ConstraintSystem(m, q, rows % q, rhs, tuple(nodes))


def key_functional(P, i: int, j: int, q: int) -> np.ndarray:
    """Coefficients of K_ij over the symmetric unknowns."""
    P = np.asarray(P) % q
    m = P.shape[0]
    x, y = P[:, i - 1], P[:, j - 1]
    out = []
    for a, b in unknown_pairs(m):
        if a == b:
            out.append(int(x[a]) * int(y[a]))
        else:
            out.append(int(x[a]) * int(y[b]) + int(x[b]) * int(y[a]))
    return np.array(out, dtype=np.int64) % q


def evaluate(functional, S, q: int) -> int:
    return int(np.dot(as_vector(functional, q).astype(object), secret_to_unknowns(S).astype(object)) % q)


@dataclass(frozen=True)
class Determination:
    determined: bool
    value: int | None = None


def is_key_determined(system: ConstraintSystem, functional, q: int) -> Determination:
    f = as_vector(functional, q)
    if f.shape[0] != system.unknown_count:
        raise ValueError(f"functional has length {f.shape[0]}, expected {system.unknown_count}")
    coef = system.space().express(f)
    if coef is None:
        return Determination(False)
    value = int(np.dot(coef.astype(object), system.rhs.astype(object)) % q)
    return Determination(True, value)


def brute_force_solutions(system: ConstraintSystem, q: int,
                          limit: int = BRUTE_FORCE_LIMIT) -> np.ndarray:
    """All unknown vectors (one per row) satisfying the system, by enumeration of GF(q)^u."""
    u = system.unknown_count
    total = q**u
    if total > limit:
        raise ValueError(f"enumeration of {q}^{u} = {total} secrets exceeds limit {limit}")
    rows = system.rows.T.astype(np.int64)
    rhs = system.rhs
    powers = q ** np.arange(u, dtype=np.int64)
    found = []
    chunk = 1 << 16
    for start in range(0, total, chunk):
        n = np.arange(start, min(start + chunk, total), dtype=np.int64)
        X = (n[:, None] // powers[None, :]) % q
        if rows.shape[1]:
            X = X[np.all((X @ rows) % q == rhs[None, :], axis=1)]
        found.append(X)
    return np.concatenate(found) if found else np.zeros((0, u), dtype=np.int64)


def brute_force_key_values(system: ConstraintSystem, functional, q: int,
                           limit: int = BRUTE_FORCE_LIMIT, solutions=None) -> set[int]:
    """Every value K takes over all symmetric secrets consistent with the system.

    No elimination involved.  Pass ``solutions`` from brute_force_solutions to
    reuse one enumeration across many keys.
    """
    if solutions is None:
        solutions = brute_force_solutions(system, q, limit)
    f = as_vector(functional, q)
    return {int(v) for v in np.unique((solutions @ f) % q)}


@dataclass
class ThresholdReport:
    threshold: int | None
    witness_subset: tuple[int, ...] = ()
    witness_pair: tuple[int, int] | None = None
    determined_value: int | None = None
    exhaustive: bool = True
    subsets_checked: int = 0

    @property
    def attack_possible(self) -> bool:
        return self.threshold is not None

    def to_dict(self) -> dict:
        return {
            "c": self.threshold,
            "witness_subset": list(self.witness_subset),
            "witness_pair": list(self.witness_pair) if self.witness_pair else None,
            "determined_value": self.determined_value,
            "exhaustive": self.exhaustive,
            "subsets_checked": self.subsets_checked,
        }


def _system_for(network: Network, P, nodes) -> ConstraintSystem:
    return constraint_system(P, [network.share(c) for c in nodes], network.q)


def first_exposed_pair(network: Network, nodes, P=None) -> tuple[tuple[int, int], int] | None:
    """First uncompromised pair (lexicographic) whose key the coalition determines."""
    P = network.public_matrix if P is None else P
    system = _system_for(network, P, nodes)
    if system.space().dim == 0:
        return None
    free = [i for i in range(1, network.N + 1) if i not in set(nodes)]
    for i, j in combinations(free, 2):
        d = is_key_determined(system, key_functional(P, i, j, network.q), network.q)
        if d.determined:
            return (i, j), d.value
    return None


def _random_subsets(N: int, size: int, count: int, rng: SplitMix64):
    seen = set()
    for _ in range(count):
        pool = list(range(1, N + 1))
        pick = []
        for _ in range(size):
            pick.append(pool.pop(rng.below(len(pool))))
        key = tuple(sorted(pick))
        if key not in seen:
            seen.add(key)
            yield key


def resilience_threshold(network: Network, exhaustive: bool | None = None,
                         samples: int = 200, seed: int = 0) -> ThresholdReport:
    """Smallest coalition that determines some key between two honest nodes.

    Exhaustive mode walks subset sizes upward and subsets lexicographically,
    stopping at the first witness.  Sampled mode (default for N > 16) draws
    ``samples`` random subsets per size, so its answer is an upper bound.
    """
    N = network.N
    if exhaustive is None:
        exhaustive = N <= EXHAUSTIVE_MAX_N
    elif exhaustive and N > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive search needs N <= {EXHAUSTIVE_MAX_N}, got N={N}")
    P = network.public_matrix
    rng = SplitMix64(seed)
    checked = 0
    for size in range(1, N - 1):
        if exhaustive:
            subsets = combinations(range(1, N + 1), size)
        else:
            subsets = _random_subsets(N, size, samples, rng)
        for nodes in subsets:
            checked += 1
            hit = first_exposed_pair(network, nodes, P)
            if hit is not None:
                pair, value = hit
                return ThresholdReport(size, tuple(nodes), pair, value, exhaustive, checked)
    return ThresholdReport(None, exhaustive=exhaustive, subsets_checked=checked)


def determination_matrix(network: Network, compromised) -> list[list[int | None]]:
    """K_ij where the coalition pins it down, else None, for every pair."""
    P = network.public_matrix
    q = network.q
    system = _system_for(network, P, compromised)
    N = network.N
    out: list[list[int | None]] = [[None] * N for _ in range(N)]
    for i in range(1, N + 1):
        for j in range(i, N + 1):
            d = is_key_determined(system, key_functional(P, i, j, q), q)
            out[i - 1][j - 1] = out[j - 1][i - 1] = d.value
    return out


def attack_report(network: Network, compromised, pair: tuple[int, int] | None = None,
                  threshold: bool = False, exhaustive: bool | None = None) -> dict:
    compromised = tuple(sorted(int(c) for c in compromised))
    P = network.public_matrix
    q = network.q
    system = _system_for(network, P, compromised)
    doc: dict = {
        "variant": network.variant,
        "N": network.N,
        "m": network.m,
        "q": q,
        "compromised": list(compromised),
        "equations": int(system.rows.shape[0]),
        "unknowns": system.unknown_count,
        "constraint_rank": system.space().dim,
    }
    if pair is not None:
        i, j = pair
        d = is_key_determined(system, key_functional(P, i, j, q), q)
        doc["pair"] = {"i": i, "j": j, "determined": d.determined, "value": d.value}
    if threshold:
        doc["threshold"] = resilience_threshold(network, exhaustive=exhaustive).to_dict()
    doc["determination_matrix"] = determination_matrix(network, compromised)
    return doc


def dumps_report(doc: dict) -> str:
    return docio.dumps(doc)
