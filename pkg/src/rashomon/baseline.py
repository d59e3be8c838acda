"""Practice-representative baseline: L2-penalized logistic regression fit from
scratch, cross-validated Bayes-probability estimation, and random sampling of
linear models filtered by Rashomon membership.

The penalty follows the inverse-regularization convention: the objective is
mean log-loss + ||coef||^2 / (2 * l2_strength * n), so smaller l2_strength
means stronger shrinkage. Solver variety is emulated by randomizing the
optimizer's starting point, seeded per draw.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import expit

from .core import Dataset, FlipVector, RashomonQuery, in_rashomon

PENALTY_GRID = (0.001, 0.01, 0.1, 1.0, 10.0, 100.0)
FOLD_CHOICES = tuple(range(2, 11))

GRAD_TOL = 1e-6


@dataclass(frozen=True)
class FeatureDataset:
    """Encoded feature matrix with binary outcome and group labels."""

    X: np.ndarray
    y: np.ndarray
    group: np.ndarray
    column_names: tuple[str, ...] = ()

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int8)
        group = np.asarray(self.group, dtype=np.int8)
        if X.ndim != 2 or X.shape[0] < 1:
            raise ValueError("X must be a nonempty 2-D array")
        if y.shape != (X.shape[0],) or group.shape != (X.shape[0],):
            raise ValueError("y and group must match the number of rows")
        if not np.all(np.isin(y, (0, 1))) or not np.all(np.isin(group, (0, 1))):
            raise ValueError("y and group must be 0/1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "group", group)

    @property
    def n(self) -> int:
        return self.X.shape[0]


@dataclass(frozen=True)
class LinearModel:
    """Logistic model: probability = sigmoid(X @ coef + intercept)."""

    coef: np.ndarray
    intercept: float
    l2_strength: float
    folds_used: int = 1
    seed: int = 0

    def predict_proba(self, X) -> np.ndarray:
        return expit(np.asarray(X, dtype=np.float64) @ self.coef + self.intercept)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) > 0.5).astype(np.int8)


def load_feature_csv(path) -> FeatureDataset:
    """Read an encoded feature CSV: numeric columns plus required y and group (0/1)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        for required in ("y", "group"):
            if required not in header:
                raise ValueError(f"{path}: missing required column '{required}'")
        y_col = header.index("y")
        g_col = header.index("group")
        feat_cols = [j for j in range(len(header)) if j not in (y_col, g_col)]
        rows, ys, groups = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(f"{path}: line {lineno}: expected {len(header)} fields")
            try:
                rows.append([float(row[j]) for j in feat_cols])
                ys.append(int(row[y_col]))
                groups.append(int(row[g_col]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: empty dataset")
    return FeatureDataset(np.array(rows), np.array(ys), np.array(groups),
                          tuple(header[j] for j in feat_cols))


def _loss_grad(X, y, coef, intercept, l2_strength):
    n = X.shape[0]
    z = X @ coef + intercept
    p = expit(z)
    # log(1 + e^z) - y z, computed stably via logaddexp
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
    loss += float(coef @ coef) / (2.0 * l2_strength * n)
    resid = p - y
    g_coef = X.T @ resid / n + coef / (l2_strength * n)
    g_int = float(np.mean(resid))
    return loss, g_coef, g_int


def fit_logistic(train_rows, train_labels, l2_strength: float = 1.0,
                 optimizer_budget: int = 500, seed: int = 0,
                 folds_used: int = 1) -> LinearModel:
    """Deterministic full-batch gradient descent with backtracking line search.

    Runs until the gradient norm falls below 1e-6 or the iteration budget is
    spent. The seed only sets the starting point (the penalized objective is
    convex, so it does not move the optimum).
    """
    X = np.asarray(train_rows, dtype=np.float64)
    y = np.asarray(train_labels, dtype=np.float64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("train_rows must be 2-D with matching labels")
    if (y == 1).sum() < 2 or (y == 0).sum() < 2:
        raise ValueError("degenerate training fold: need at least 2 examples of each class")
    rng = np.random.default_rng(seed)
    coef = rng.normal(0.0, 0.01, size=X.shape[1])
    intercept = float(rng.normal(0.0, 0.01))

    loss, g_coef, g_int = _loss_grad(X, y, coef, intercept, l2_strength)
    step = 1.0
    for _ in range(optimizer_budget):
        gnorm2 = float(g_coef @ g_coef) + g_int * g_int
        if np.sqrt(gnorm2) < GRAD_TOL:
            break
        # backtracking: halve until the Armijo decrease holds
        accepted = False
        while step >= 1e-12:
            new_coef = coef - step * g_coef
            new_int = intercept - step * g_int
            new_loss, new_gc, new_gi = _loss_grad(X, y, new_coef, new_int, l2_strength)
            if new_loss <= loss - 1e-4 * step * gnorm2:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        coef, intercept, loss, g_coef, g_int = new_coef, new_int, new_loss, new_gc, new_gi
        step = min(step * 2.0, 1e6)  # let the step recover between iterations
    return LinearModel(coef=coef, intercept=intercept, l2_strength=l2_strength,
                       folds_used=folds_used, seed=seed)


def assign_folds(n: int, folds: int, seed: int) -> np.ndarray:
    """Fold label per original row index: contiguous blocks of a seeded permutation."""
    if folds < 2:
        raise ValueError("folds must be >= 2")
    if folds > n:
        raise ValueError(f"cannot split {n} rows into {folds} folds")
    perm = np.random.default_rng(seed).permutation(n)
    labels = np.empty(n, dtype=np.int64)
    for f, block in enumerate(np.array_split(perm, folds)):
        labels[block] = f
    return labels


def cross_val_probs(fds: FeatureDataset, fold_labels: np.ndarray,
                    l2_strength: float = 1.0, optimizer_budget: int = 500,
                    seed: int = 0) -> np.ndarray:
    """Held-out probability for every row: each fold is predicted by a model fit
    on the other folds, so no row's own fold enters its training set."""
    p_hat = np.empty(fds.n, dtype=np.float64)
    n_folds = int(fold_labels.max()) + 1
    for f in range(n_folds):
        held = fold_labels == f
        model = fit_logistic(fds.X[~held], fds.y[~held], l2_strength,
                             optimizer_budget, seed=seed, folds_used=n_folds)
        p_hat[held] = model.predict_proba(fds.X[held])
    return p_hat


def estimate_bayes_probs(fds: FeatureDataset, folds: int = 5, seed: int = 0,
                         fold_labels: Optional[np.ndarray] = None,
                         l2_strength: float = 1.0,
                         optimizer_budget: int = 500) -> np.ndarray:
    """Cross-validated estimates of Pr(y=1|x), ready for Dataset construction.

    ``fold_labels`` overrides the seeded assignment, keeping estimates keyed to
    original row indices when callers reorder rows.
    """
    if fold_labels is None:
        fold_labels = assign_folds(fds.n, folds, seed)
    return cross_val_probs(fds, fold_labels, l2_strength, optimizer_budget, seed)


@dataclass(frozen=True)
class LinearDraw:
    """One sampled linear model, reduced to its flip vector and membership flag."""

    flip: FlipVector
    in_rashomon: bool
    folds: int
    l2_strength: float
    fit_seed: int


@dataclass
class LinearSampleRun:
    draws: list[LinearDraw] = field(default_factory=list)
    n_skipped: int = 0

    @property
    def in_set_fraction(self) -> float:
        if not self.draws:
            return 0.0
        return sum(d.in_rashomon for d in self.draws) / len(self.draws)


def sample_linear_models(fds: FeatureDataset, reference_query: RashomonQuery,
                         n_models: int = 1000, seed: int = 0,
                         optimizer_budget: int = 300) -> LinearSampleRun:
    """Sample penalized logistic models with random (folds, penalty, start) and
    flag which land in R_N(eps) of the reference scored dataset.

    The reference dataset must score the same rows in the same order. Draws
    whose cross-validation hits a single-class training fold are skipped and
    counted.
    """
    ds = reference_query.dataset
    if fds.n != ds.n:
        raise ValueError("feature rows and reference dataset must align")
    rng = np.random.default_rng(seed)
    run = LinearSampleRun()
    for _ in range(n_models):
        folds = int(rng.choice(FOLD_CHOICES))
        strength = float(rng.choice(PENALTY_GRID))
        fit_seed = int(rng.integers(0, 2**31 - 1))
        labels = assign_folds(fds.n, folds, fit_seed)
        try:
            p_hat = cross_val_probs(fds, labels, strength, optimizer_budget, fit_seed)
        except ValueError:
            run.n_skipped += 1
            continue
        preds = (p_hat > 0.5).astype(np.uint8)
        flip = FlipVector(preds ^ ds.bayes_preds)
        run.draws.append(LinearDraw(
            flip=flip,
            in_rashomon=in_rashomon(reference_query, flip),
            folds=folds,
            l2_strength=strength,
            fit_seed=fit_seed,
        ))
    return run
