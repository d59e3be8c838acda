"""Fairest-model search inside R_N(eps).

PPR admits an exact O(N log N) knapsack solution because every useful flip has
one of two values (1/|A| or 1/|B|): the optimum consists of lowest-weight
prefixes per group, found by an incremental frontier scan. FPR/TPR have varied
values, so a greedy fractional-knapsack pass is used instead, returning a
certified bound on the distance to the true optimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    MEMBERSHIP_SLACK,
    Dataset,
    FlipVector,
    MetricKind,
    RashomonQuery,
    disparity,
    flip_values,
    used_tolerance,
)


@dataclass(frozen=True)
class FairnessReport:
    """Outcome of a fairness optimization over R_N(eps).

    ``gap_bound`` certifies final_disparity <= true optimum + gap_bound.
    It is 0 for PPR (exact) and at most max_i v_i for FPR/TPR.
    """

    metric: MetricKind
    epsilon: float
    initial_disparity: float
    final_disparity: float
    flip: FlipVector
    used_tolerance: float
    gap_bound: float


def _report(query: RashomonQuery, metric: MetricKind, initial: float,
            flip: FlipVector, gap_bound: float) -> FairnessReport:
    return FairnessReport(
        metric=metric,
        epsilon=query.epsilon,
        initial_disparity=initial,
        final_disparity=disparity(query.dataset, flip, metric),
        flip=flip,
        used_tolerance=used_tolerance(query.dataset, flip),
        gap_bound=gap_bound,
    )


def _sorted_weight_prefix(dataset: Dataset, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices under ``mask`` ordered by (weight, index), with prefix weight sums."""
    idx = np.flatnonzero(mask)
    order = np.lexsort((idx, dataset.weights[idx]))
    idx = idx[order]
    prefix = np.concatenate(([0.0], np.cumsum(dataset.weights[idx])))
    return idx, prefix


def _max_fitting(prefix: np.ndarray, budget: float) -> int:
    """Largest k with prefix[k] <= budget (prefix[0] = 0)."""
    if budget < 0.0:
        return 0
    return int(np.searchsorted(prefix, budget, side="right")) - 1


def optimize_ppr(query: RashomonQuery) -> FairnessReport:
    """Exact minimizer of PPR disparity over R_N(eps).

    Scans lowest-weight prefix counts per group for the pair minimizing the
    absolute residual gap. Besides the both-groups-reduce frontier, the scan
    also covers prefixes of disparity-increasing flips in one group paired
    with reducers in the other: when the value grid overshoots past zero,
    the exhaustive optimum can use such a correction, and exactness against
    enumeration requires covering it.
    """
    ds = query.dataset
    initial = disparity(ds, FlipVector.zeros(ds.n), MetricKind.PPR)
    vals = flip_values(ds, MetricKind.PPR)
    if vals.high_group is None:  # groups tie exactly; no search
        return _report(query, MetricKind.PPR, initial, FlipVector.zeros(ds.n), 0.0)

    high = vals.high_group
    in_high = ds.group == high
    pred1 = ds.bayes_preds == 1
    cap = ds.n * (query.epsilon + MEMBERSHIP_SLACK)
    n_high = int(in_high.sum())
    n_low = ds.n - n_high
    v_high = 1.0 / n_high
    v_low = 1.0 / n_low

    # Reducers shrink the oriented gap, increasers grow it.
    red_h = _sorted_weight_prefix(ds, in_high & pred1)
    red_l = _sorted_weight_prefix(ds, ~in_high & ~pred1)
    inc_h = _sorted_weight_prefix(ds, in_high & ~pred1)
    inc_l = _sorted_weight_prefix(ds, ~in_high & pred1)

    # best = (|gap|, used weight, flip count); lexicographic, so equal gaps
    # resolve to the cheaper then smaller flip set, deterministically.
    best = (initial, 0.0, 0)
    best_counts = (0, 0, red_h, red_l)  # (count_first, count_second, list_first, list_second)

    def scan(first, second, v_f: float, v_s: float, sign_s: float) -> None:
        """For each prefix count of ``first``, try the residual-minimizing counts of ``second``.

        sign_s = -1 when ``second`` holds reducers (value subtracts from the gap),
        +1 when it holds increasers used to correct an overshoot.
        """
        nonlocal best, best_counts
        a_max = _max_fitting(first[1], cap)
        for a in range(a_max + 1):
            budget = cap - first[1][a]
            b_fit = _max_fitting(second[1], budget)
            # residual after the a flips; candidate b nearest the exact cancel point
            rem = initial - a * v_f
            target = -sign_s * rem / v_s
            for b in sorted({0, b_fit,
                             min(b_fit, max(0, math.floor(target))),
                             min(b_fit, max(0, math.ceil(target)))}):
                gap = rem + sign_s * b * v_s
                cand = (abs(gap), first[1][a] + second[1][b], a + b)
                if cand < best:
                    best = cand
                    best_counts = (a, b, first, second)

    scan(red_h, red_l, v_high, v_low, -1.0)   # both reduce
    scan(red_h, inc_l, v_high, v_low, +1.0)   # high-side reduce, low-side correct
    scan(red_l, inc_h, v_low, v_high, +1.0)   # low-side reduce, high-side correct

    a, b, first, second = best_counts
    chosen = np.concatenate([first[0][:a], second[0][:b]])
    flip = FlipVector.from_indices(ds.n, chosen)
    return _report(query, MetricKind.PPR, initial, flip, 0.0)


def optimize_rate(query: RashomonQuery, metric: MetricKind) -> FairnessReport:
    """Greedy fractional-knapsack minimizer of FPR or TPR disparity.

    Flips improvable records in descending value/weight ratio (zero-weight
    ones first) while each flip both fits the capacity and shrinks the
    absolute residual gap; never flips fractionally. The certificate depends
    on how the pass ends: stopped by capacity with the gap still positive,
    the classic fractional bound (value of the first non-fitting element
    scaled to the remaining capacity) applies; stopped because the next flip
    would not improve, or after crossing zero, |remaining gap| itself is a
    valid bound; all improvable flips taken without crossing is exact.
    """
    if metric is MetricKind.PPR:
        raise ValueError("use optimize_ppr for PPR")
    ds = query.dataset
    initial = disparity(ds, FlipVector.zeros(ds.n), metric)
    vals = flip_values(ds, metric)
    if vals.high_group is None:
        return _report(query, metric, initial, FlipVector.zeros(ds.n), 0.0)

    idx = np.flatnonzero(vals.values > 0.0)
    v = vals.values[idx]
    w = ds.weights[idx]
    with np.errstate(divide="ignore"):
        ratio = np.where(w > 0.0, v / np.where(w > 0.0, w, 1.0), np.inf)
    order = np.lexsort((idx, -ratio))

    cap = ds.n * (query.epsilon + MEMBERSHIP_SLACK)
    rem = initial
    tot_w = 0.0
    chosen: list[int] = []
    gap_bound = 0.0
    for k in order:
        if abs(rem - v[k]) >= abs(rem):
            gap_bound = abs(rem)  # further flips cannot improve; exact >= 0 certifies
            break
        if tot_w + w[k] > cap:
            gap_bound = (cap - tot_w) / w[k] * v[k]  # fractional-knapsack bound
            break
        tot_w += w[k]
        rem -= v[k]
        chosen.append(int(idx[k]))
    else:
        # every improvable flip taken; exact unless the trajectory crossed zero
        gap_bound = 0.0 if rem >= 0.0 else abs(rem)

    flip = FlipVector.from_indices(ds.n, chosen)
    return _report(query, metric, initial, flip, gap_bound)
