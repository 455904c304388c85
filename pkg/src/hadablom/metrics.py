"""Unique-key sweeps over t and a storage/work cost model for both variants."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass
from statistics import fmean
from typing import Iterable, Sequence

import numpy as np

from hadablom.field import check_prime
from hadablom.scheme import CLASSIC, MODIFIED, VARIANTS, Network, SchemeParams, full_key_matrix, m_from_t, provision


@dataclass(frozen=True)
class SweepPoint:
    t: int
    m: int
    q: int
    N: int
    seed: int
    unique_keys: int


def unique_key_count(network: Network, K=None) -> int:
    """Distinct values of K_ij over unordered pairs i < j."""
    K = full_key_matrix(network) if K is None else np.asarray(K)
    iu = np.triu_indices(K.shape[0], k=1)
    if iu[0].size == 0:
        return 0
    return int(np.unique(K[iu]).size)


def sweep_t(N: int, q: int, t_values: Iterable[int], seeds: Sequence[int],
            variant: str = MODIFIED, blom_strict: bool = False) -> list[SweepPoint]:
    """One point per (t, seed), ordered by t then by position in ``seeds``."""
    check_prime(q)
    if q <= N:
        raise ValueError(f"prime too small: q={q} must exceed N={N}")
    points = []
    for t in t_values:
        if not 1 <= t <= N:
            raise ValueError(f"t={t} out of range [1, {N}]")
        m = m_from_t(t, blom_strict)
        for seed in seeds:
            net = provision(SchemeParams(variant, N, m, q, seed))
            points.append(SweepPoint(t, m, q, N, seed, unique_key_count(net)))
    return points


def aggregate(points: Iterable[SweepPoint]) -> list[tuple[int, float]]:
    by_t: dict[int, list[int]] = {}
    for p in points:
        by_t.setdefault(p.t, []).append(p.unique_keys)
    return [(t, fmean(v)) for t, v in sorted(by_t.items())]


def largest_jump(series: Sequence[tuple[int, float]]) -> int:
    """t at which the mean count rises the most from the previous t (first on ties)."""
    if len(series) < 2:
        raise ValueError("need at least two sweep points")
    best_t, best = series[1][0], series[1][1] - series[0][1]
    for (_, prev), (t, cur) in zip(series[1:], series[2:]):
        if cur - prev > best:
            best_t, best = t, cur - prev
    return best_t


def recommended_t(N: int) -> int:
    """N // 2 + 1; odd N rounds the half down."""
    if N < 2:
        raise ValueError(f"N must be at least 2, got {N}")
    return N // 2 + 1


def sweep_csv(points: Sequence[SweepPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "m", "q", "N", "seed", "unique_keys"])
    for p in points:
        w.writerow([p.t, p.m, p.q, p.N, p.seed, p.unique_keys])
    return buf.getvalue()


def aggregate_csv(series: Sequence[tuple[int, float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "mean_unique_keys"])
    for t, mean in series:
        w.writerow([t, f"{mean:.4f}"])
    return buf.getvalue()


@dataclass(frozen=True)
class CostRecord:
    variant: str
    m: int
    q: int
    stored_field_elements_per_node: int
    stored_bits_per_node: int
    mults_per_key: int
    sign_ops_per_key: int
    adds_per_key: int
    column_synthesis_ops: int


def cost_model(params: SchemeParams) -> CostRecord:
    """Per-node storage and per-key work.

    Classic nodes keep their private row and their public column and do m
    general multiplications per key.  Hadamard nodes keep only the row; each
    peer-column entry is +-1 mod q, so a multiply degenerates to keep-or-negate,
    and producing the entry costs one popcount-parity evaluation.
    """
    m, q = params.m, params.q
    bits = (q - 1).bit_length()
    adds = max(m - 1, 0)
    if params.variant == CLASSIC:
        return CostRecord(CLASSIC, m, q, 2 * m, 2 * m * bits, m, 0, adds, 0)
    if params.variant == MODIFIED:
        return CostRecord(MODIFIED, m, q, m, m * bits, 0, m, adds, m)
    raise ValueError(f"unknown variant {params.variant!r}")


def cost_report(m: int, q: int, variants: Sequence[str] = VARIANTS) -> dict:
    records = [asdict(cost_model(SchemeParams(v, max(m, 1), m, q))) for v in variants]
    return {"m": m, "q": q, "variants": records}
