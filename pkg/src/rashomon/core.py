"""Data model and primitive operations for largest-possible Rashomon sets.

A model over N scored records is identified with a length-N flip vector
marking where it deviates from the Bayes-optimal prediction 1{p > 0.5}.
Flipping record i costs w_i = |2 p_i - 1| expected accuracy, so membership
in the set R_N(eps) is the linear test (theta . w) / N <= eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np

# Absolute slack on the membership comparison so knapsack solutions that
# fill the capacity exactly are not rejected by rounding.
MEMBERSHIP_SLACK = 1e-12


class MetricKind(Enum):
    """The three group-fairness criteria, computed with probabilities as soft labels."""

    PPR = "ppr"
    FPR = "fpr"
    TPR = "tpr"


@dataclass(frozen=True)
class DataRecord:
    """One individual: position, Bayes probability p = Pr(y=1|x), binary group, optional outcome.

    The observed outcome y is carried for provenance only and is never used
    in any metric; all rates are expectations under p.
    """

    index: int
    p: float
    group: int
    y: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"record {self.index}: p={self.p} outside [0, 1]")
        if self.group not in (0, 1):
            raise ValueError(f"record {self.index}: group must be 0 or 1, got {self.group}")
        if self.y is not None and self.y not in (0, 1):
            raise ValueError(f"record {self.index}: y must be 0 or 1, got {self.y}")

    @property
    def weight(self) -> float:
        """Expected-accuracy cost |2p - 1| of flipping this record's prediction."""
        return abs(2.0 * self.p - 1.0)

    @property
    def bayes_pred(self) -> int:
        """Bayes-optimal prediction; ties at p = 0.5 predict 0."""
        return 1 if self.p > 0.5 else 0


class Dataset:
    """Immutable ordered collection of records; the universe R_N(eps) is defined over.

    Group label 1 is reported as group A (protected), 0 as group B. Disparity
    computations are symmetric in the labels, so the naming only matters for
    reading directions out of reports.
    """

    def __init__(self, p, group, y=None):
        p = np.asarray(p, dtype=np.float64)
        group = np.asarray(group, dtype=np.int8)
        if p.ndim != 1 or p.size < 1:
            raise ValueError("dataset needs at least one record")
        if group.shape != p.shape:
            raise ValueError("p and group must have the same length")
        if np.any((p < 0.0) | (p > 1.0)):
            bad = int(np.argmax((p < 0.0) | (p > 1.0)))
            raise ValueError(f"record {bad}: p={p[bad]} outside [0, 1]")
        if not np.all(np.isin(group, (0, 1))):
            raise ValueError("group labels must be 0 or 1")
        if y is not None:
            y = np.asarray(y, dtype=np.int8)
            if y.shape != p.shape:
                raise ValueError("y must have the same length as p")
            if not np.all(np.isin(y, (0, 1))):
                raise ValueError("y labels must be 0 or 1")
            y = y.copy()
            y.setflags(write=False)
        self._p = p.copy()
        self._group = group.copy()
        self._y = y
        self._w = np.abs(2.0 * self._p - 1.0)
        self._pred = (self._p > 0.5).astype(np.int8)
        for arr in (self._p, self._group, self._w, self._pred):
            arr.setflags(write=False)

    @classmethod
    def from_records(cls, records: Sequence[DataRecord]) -> "Dataset":
        recs = list(records)
        if [r.index for r in recs] != list(range(len(recs))):
            raise ValueError("record indices must run 0..N-1 in order")
        y = None
        if any(r.y is not None for r in recs):
            if any(r.y is None for r in recs):
                raise ValueError("either all records carry y or none do")
            y = [r.y for r in recs]
        return cls([r.p for r in recs], [r.group for r in recs], y)

    @property
    def n(self) -> int:
        return self._p.size

    def __len__(self) -> int:
        return self.n

    @property
    def p(self) -> np.ndarray:
        return self._p

    @property
    def group(self) -> np.ndarray:
        return self._group

    @property
    def y(self) -> Optional[np.ndarray]:
        return self._y

    @property
    def weights(self) -> np.ndarray:
        return self._w

    @property
    def bayes_preds(self) -> np.ndarray:
        return self._pred

    @property
    def mean_weight(self) -> float:
        return float(self._w.mean())

    def records(self) -> list[DataRecord]:
        ys = self._y if self._y is not None else [None] * self.n
        return [
            DataRecord(i, float(self._p[i]), int(self._group[i]),
                       None if ys[i] is None else int(ys[i]))
            for i in range(self.n)
        ]

    def __repr__(self):
        return f"Dataset(n={self.n}, mean_weight={self.mean_weight:.4f})"


class FlipVector:
    """Length-N bit vector; bit i set means record i's prediction is inverted."""

    __slots__ = ("_bits",)

    def __init__(self, bits):
        bits = np.asarray(bits)
        if bits.ndim != 1:
            raise ValueError("flip vector must be one-dimensional")
        if not np.all(np.isin(bits, (0, 1))):
            raise ValueError("flip vector entries must be 0 or 1")
        self._bits = bits.astype(np.uint8)
        self._bits.setflags(write=False)

    @classmethod
    def zeros(cls, n: int) -> "FlipVector":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_indices(cls, n: int, indices) -> "FlipVector":
        bits = np.zeros(n, dtype=np.uint8)
        bits[list(indices)] = 1
        return cls(bits)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    def flipped_indices(self) -> np.ndarray:
        return np.flatnonzero(self._bits)

    def __len__(self) -> int:
        return self._bits.size

    def __eq__(self, other) -> bool:
        return isinstance(other, FlipVector) and np.array_equal(self._bits, other._bits)

    def __hash__(self):
        return hash(self._bits.tobytes())

    def __repr__(self):
        return f"FlipVector({self.flipped_indices().tolist()}, n={len(self)})"


@dataclass(frozen=True)
class RashomonQuery:
    """A dataset plus an error tolerance; parameterizes every set-level computation."""

    dataset: Dataset
    epsilon: float

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")

    @property
    def small_epsilon(self) -> bool:
        """True when eps is below half the mean weight, the regime the asymptotics require."""
        return self.epsilon < self.dataset.mean_weight / 2.0


class FlipValues(NamedTuple):
    """Per-record knapsack values plus the initial disparity direction.

    ``high_group`` is the group label whose rate is higher at the Bayes-optimal
    model, or None when the groups tie exactly (all values are then zero).
    """

    values: np.ndarray
    high_group: Optional[int]


def _check_length(dataset: Dataset, flip: FlipVector) -> None:
    if len(flip) != dataset.n:
        raise ValueError(f"flip vector length {len(flip)} != dataset size {dataset.n}")


def used_tolerance(dataset: Dataset, flip: FlipVector) -> float:
    """Expected-accuracy cost (theta . w) / N of the given flips."""
    _check_length(dataset, flip)
    return float(flip.bits @ dataset.weights) / dataset.n


def accuracy(dataset: Dataset, flip: FlipVector) -> float:
    """Expected accuracy of the model identified by ``flip``.

    Equals the Bayes-optimal accuracy minus used_tolerance(flip).
    """
    _check_length(dataset, flip)
    f = dataset.bayes_preds ^ flip.bits
    p = dataset.p
    return float(np.mean(p * f + (1.0 - p) * (1 - f)))


def in_rashomon(query: RashomonQuery, flip: FlipVector) -> bool:
    """Membership test (theta . w)/N <= eps, with absolute slack for boundary fills."""
    return used_tolerance(query.dataset, flip) <= query.epsilon + MEMBERSHIP_SLACK


def _group_masks(dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    a = dataset.group == 1
    b = ~a
    if not a.any() or not b.any():
        raise ValueError("both groups must be nonempty for disparity computations")
    return a, b


def _rate_weights(dataset: Dataset, metric: MetricKind) -> np.ndarray:
    """Per-record soft-label mass entering the metric's numerator."""
    if metric is MetricKind.PPR:
        return np.ones(dataset.n)
    if metric is MetricKind.FPR:
        return 1.0 - dataset.p
    if metric is MetricKind.TPR:
        return dataset.p.copy()
    raise ValueError(f"unknown metric {metric!r}")


def _group_denominators(dataset: Dataset, metric: MetricKind) -> tuple[np.ndarray, float, float, np.ndarray, np.ndarray]:
    a, b = _group_masks(dataset)
    mass = _rate_weights(dataset, metric)
    den_a = float(mass[a].sum()) if metric is not MetricKind.PPR else float(a.sum())
    den_b = float(mass[b].sum()) if metric is not MetricKind.PPR else float(b.sum())
    if den_a <= 0.0 or den_b <= 0.0:
        raise ValueError(f"{metric.value} disparity undefined: zero denominator in a group")
    return mass, den_a, den_b, a, b


def _group_rates(dataset: Dataset, preds: np.ndarray, metric: MetricKind) -> tuple[float, float]:
    mass, den_a, den_b, a, b = _group_denominators(dataset, metric)
    return float((mass[a] * preds[a]).sum() / den_a), float((mass[b] * preds[b]).sum() / den_b)


def disparity(dataset: Dataset, flip: FlipVector, metric: MetricKind) -> float:
    """Absolute between-group gap of the metric under the flipped predictions."""
    _check_length(dataset, flip)
    preds = dataset.bayes_preds ^ flip.bits
    rate_a, rate_b = _group_rates(dataset, preds, metric)
    return abs(rate_a - rate_b)


def signed_reductions(dataset: Dataset, metric: MetricKind, high_group: int) -> np.ndarray:
    """Per-record signed disparity reduction for the gap oriented high - low.

    With gap(theta) = rate_high(theta) - rate_low(theta), flipping record i
    changes the gap by exactly -s_i, so gap(theta) = gap(0) - theta . s.
    Positive entries are the flips that reduce the oriented gap.
    """
    mass, den_a, den_b, a, _ = _group_denominators(dataset, metric)
    den = np.where(a, den_a, den_b)
    # In the high group, a 1 -> 0 flip removes mass from the numerator (reduces the
    # gap); in the low group a 0 -> 1 flip adds mass (also reduces the gap).
    in_high = dataset.group == high_group
    pred1 = dataset.bayes_preds == 1
    sign = np.where(in_high == pred1, 1.0, -1.0)
    return sign * mass / den


def flip_values(dataset: Dataset, metric: MetricKind) -> FlipValues:
    """Knapsack values: v_i > 0 exactly for flips that reduce the initial disparity.

    The direction is frozen at the Bayes-optimal model; a dataset whose groups
    tie exactly gets all-zero values (optimizers then return the zero vector).
    """
    zero = FlipVector.zeros(dataset.n)
    preds = dataset.bayes_preds ^ zero.bits
    rate_a, rate_b = _group_rates(dataset, preds, metric)
    if rate_a == rate_b:
        return FlipValues(np.zeros(dataset.n), None)
    high = 1 if rate_a > rate_b else 0
    s = signed_reductions(dataset, metric, high)
    return FlipValues(np.maximum(s, 0.0), high)
