"""Exhaustive enumeration of R_N(eps) for small N: exact sizes, flip frequencies,
minimum and mean disparities. Ground truth for validating the optimizers, the
sampler, and the asymptotic formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    MEMBERSHIP_SLACK,
    Dataset,
    FlipVector,
    MetricKind,
    RashomonQuery,
    _group_rates,
    flip_values,
    signed_reductions,
)

DEFAULT_LIMIT = 22  # 2^22 ~ 4M vectors keeps a call in the seconds range

_CHUNK = 1 << 16


@dataclass
class EnumerationResult:
    """All exact statistics of R_N(eps) collected in one pass over the 2^N vectors.

    ``member_codes`` holds each member as an integer bitmask (bit i = record i);
    ``members()`` materializes them as FlipVectors.
    """

    n: int
    size: int
    exact_q: np.ndarray
    exact_min: dict[MetricKind, float] = field(default_factory=dict)
    exact_avg: dict[MetricKind, float] = field(default_factory=dict)
    member_codes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def members(self) -> list[FlipVector]:
        return [self.flip_vector(code) for code in self.member_codes]

    def flip_vector(self, code: int) -> FlipVector:
        bits = (int(code) >> np.arange(self.n)) & 1
        return FlipVector(bits.astype(np.uint8))


def _metric_setup(dataset: Dataset) -> dict[MetricKind, tuple[float, np.ndarray]]:
    """Initial oriented gap and signed reduction vector per computable metric."""
    out = {}
    for metric in MetricKind:
        try:
            values = flip_values(dataset, metric)
        except ValueError:
            continue
        high = values.high_group if values.high_group is not None else 1
        s = signed_reductions(dataset, metric, high)
        rate_a, rate_b = _group_rates(dataset, dataset.bayes_preds, metric)
        gap0 = rate_a - rate_b if high == 1 else rate_b - rate_a
        out[metric] = (gap0, s)
    return out


def enumerate_rashomon(query: RashomonQuery, limit: int = DEFAULT_LIMIT) -> EnumerationResult:
    """Visit all 2^N flip vectors and collect the members of R_N(eps).

    Uses the same membership predicate (and slack) as core.in_rashomon.
    Raises if N exceeds ``limit``; pass a larger limit explicitly to override.
    """
    ds = query.dataset
    n = ds.n
    if n > limit:
        raise ValueError(f"enumeration over 2^{n} vectors exceeds limit {limit}; "
                         f"pass limit={n} to override")
    w = ds.weights
    cap = ds.n * (query.epsilon + MEMBERSHIP_SLACK)
    metrics = _metric_setup(ds)

    total = 1 << n
    bit_cols = np.arange(n, dtype=np.int64)
    size = 0
    q_counts = np.zeros(n, dtype=np.int64)
    gap_sums = {m: 0.0 for m in metrics}
    gap_mins = {m: np.inf for m in metrics}
    codes_chunks = []

    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        codes = np.arange(start, stop, dtype=np.int64)
        bits = ((codes[:, None] >> bit_cols) & 1).astype(np.float64)
        member = bits @ w <= cap
        if not member.any():
            continue
        mbits = bits[member]
        size += mbits.shape[0]
        q_counts += mbits.sum(axis=0).astype(np.int64)
        codes_chunks.append(codes[member])
        for m, (gap0, s) in metrics.items():
            gaps = np.abs(gap0 - mbits @ s)
            gap_sums[m] += float(gaps.sum())
            gap_mins[m] = min(gap_mins[m], float(gaps.min()))

    member_codes = np.concatenate(codes_chunks) if codes_chunks else np.zeros(0, np.int64)
    return EnumerationResult(
        n=n,
        size=size,
        exact_q=q_counts / size,
        exact_min={m: gap_mins[m] for m in metrics},
        exact_avg={m: gap_sums[m] / size for m in metrics},
        member_codes=member_codes,
    )
