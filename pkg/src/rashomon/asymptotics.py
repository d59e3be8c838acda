"""Large-sample machinery: the root C(eps) of the tolerance equation, per-record
flip probabilities q(w) = 1/(1 + e^{Cw}), the growth base B(eps) of the set
size, set-averaged metrics, and expected tolerance usage.

The empirical weight multiset stands in for the weight density: the defining
equation is the finite sum mean_i w_i / (1 + e^{C w_i}) = eps, solved by
bisection (the left side is strictly decreasing in C whenever some w_i > 0).
A continuous-uniform variant, with the integral evaluated by adaptive
quadrature, backs the closed-form validation path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import expit

from .core import Dataset, MetricKind, RashomonQuery, flip_values, signed_reductions

RESIDUAL_TOL = 1e-10


class RegimeError(ValueError):
    """eps is at or above half the mean weight, where C(eps) <= 0 and every flip
    probability drifts to 1/2; the asymptotic operations refuse rather than
    extrapolate."""


@dataclass(frozen=True)
class AsymptoticSolution:
    """Root C of the tolerance equation and the per-record flip probabilities."""

    epsilon: float
    c: float
    q: np.ndarray
    regime_ok: bool


@dataclass(frozen=True)
class SizeCurve:
    """log B(eps) accumulated along a grid, with log10 |R_N| = N log10 B."""

    epsilons: np.ndarray
    c_values: np.ndarray
    log_base: np.ndarray
    log10_size: np.ndarray

    @property
    def base(self) -> np.ndarray:
        return np.exp(self.log_base)


def empirical_g(weights, c: float) -> float:
    """mean_i w_i / (1 + e^{c w_i}): expected tolerance used at logistic level c."""
    w = np.asarray(weights, dtype=np.float64)
    return float(np.mean(w * expit(-c * w)))


def uniform_g(c: float) -> float:
    """Integral of w / (1 + e^{cw}) over [0, 1]: the continuous-uniform g.

    Evaluated by adaptive quadrature; this replaces the dilogarithm closed form.
    """
    if c == 0.0:
        return 0.25
    val, _ = quad(lambda w: w * expit(-c * w), 0.0, 1.0, epsabs=1e-15, epsrel=1e-13)
    return val


def _solve_root(g: Callable[[float], float], epsilon: float, g_zero: float) -> float:
    """Unique positive root of g(C) = eps for strictly decreasing g with g(0) = g_zero."""
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if epsilon >= g_zero:
        raise RegimeError(
            f"epsilon={epsilon} is not below half the mean weight ({g_zero:.6g}); "
            "the flip-probability model only holds for smaller tolerances")
    hi = 1.0
    while g(hi) >= epsilon:
        hi *= 2.0
        if hi > 1e12:
            raise ArithmeticError("failed to bracket the root")
    lo = 0.0
    # converge the bracket itself: the absolute eps-residual alone is too loose
    # when eps is tiny (grid points of the size integral go down to ~eps/m^2)
    while hi - lo > 1e-14 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if g(mid) > epsilon:
            lo = mid
        else:
            hi = mid
    c = 0.5 * (lo + hi)
    if abs(g(c) - epsilon) > RESIDUAL_TOL:
        raise ArithmeticError(f"bisection residual exceeds {RESIDUAL_TOL}")
    return c


def solve_c(weights, epsilon: float) -> float:
    """C > 0 with |mean_i w_i/(1 + e^{C w_i}) - eps| below 1e-10.

    Requires 0 < eps < mean(w)/2 (the g(0) anchor) and at least one positive
    weight; a tolerance at or beyond the regime edge raises RegimeError,
    distinct from the ValueError for eps <= 0.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.size == 0 or not np.any(w > 0.0):
        raise ValueError("need at least one positive weight")
    return _solve_root(lambda c: empirical_g(w, c), epsilon, float(w.mean()) / 2.0)


def solve_c_uniform(epsilon: float) -> float:
    """C(eps) for the exact continuous-uniform weight distribution."""
    return _solve_root(uniform_g, epsilon, 0.25)


def flip_probabilities(query: RashomonQuery) -> AsymptoticSolution:
    """Per-record probability of being flipped in a uniform draw from R_N(eps).

    q_i = 1/(1 + e^{C w_i}) lies in (0, 1/2], hitting 1/2 exactly at w_i = 0.
    """
    ds = query.dataset
    c = solve_c(ds.weights, query.epsilon)
    return AsymptoticSolution(
        epsilon=query.epsilon,
        c=c,
        q=expit(-c * ds.weights),
        regime_ok=query.small_epsilon,
    )


def _log_base_grid(solve: Callable[[float], float], epsilon: float,
                   grid_points: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Accumulate log B(x) = int_0^x C, substituting x = u^2 to tame C ~ x^{-1/2}.

    Composite midpoint rule over ``grid_points`` panels in u: the substituted
    integrand 2u C(u^2) is bounded, and midpoints avoid the u = 0 endpoint where
    it is a 0 * inf limit. Returns (right-edge eps grid, C at edges, log B at edges).
    """
    if grid_points < 16:
        raise ValueError("grid_points must be at least 16")
    u_edges = np.sqrt(epsilon) * np.arange(grid_points + 1) / grid_points
    h = u_edges[1]
    mids = u_edges[:-1] + 0.5 * h
    panel = np.array([h * 2.0 * u * solve(u * u) for u in mids])
    eps_grid = u_edges[1:] ** 2
    log_base = np.cumsum(panel)
    c_edges = np.array([solve(x) for x in eps_grid])
    return eps_grid, c_edges, log_base


def rashomon_base(weights, epsilon: float, grid_points: int = 256) -> SizeCurve:
    """Growth base B along (0, eps]: |R_N(eps)| ~ B(eps)^N for large N.

    B(0) = 1, B is non-decreasing, and 1 <= B <= 2 always.
    """
    w = np.asarray(weights, dtype=np.float64)
    eps_grid, c_vals, log_base = _log_base_grid(
        lambda x: solve_c(w, x), epsilon, grid_points)
    return SizeCurve(
        epsilons=eps_grid,
        c_values=c_vals,
        log_base=log_base,
        log10_size=w.size * log_base / np.log(10.0),
    )


def uniform_log_base(epsilon: float, grid_points: int = 256) -> float:
    """log B(eps) for the exact continuous-uniform weight distribution."""
    _, _, log_base = _log_base_grid(solve_c_uniform, epsilon, grid_points)
    return float(log_base[-1])


def metric_coefficients(dataset: Dataset, metric: MetricKind) -> tuple[float, np.ndarray]:
    """(h0 total, h1 vector) so the metric's oriented gap is h0 + sum_i h1_i f_i.

    Orientation puts the group with the higher Bayes-optimal rate first; ties
    orient group 1 first (the disparities are zero-symmetric there anyway).
    """
    vals = flip_values(dataset, metric)
    high = vals.high_group if vals.high_group is not None else 1
    s = signed_reductions(dataset, metric, high)
    # s already carries mass/denominator with sign by (group, prediction); the
    # per-prediction coefficient flips sign with the Bayes prediction.
    pred1 = dataset.bayes_preds == 1
    h1 = np.where(pred1, s, -s)
    return 0.0, h1


def average_metric(query: RashomonQuery, metric: MetricKind,
                   q: Optional[np.ndarray] = None) -> float:
    """Expectation of the oriented disparity gap over all of R_N(eps).

    Uses the linear decomposition of the gap in the individual predictions,
    so only the per-record flip probabilities are needed; ``q`` defaults to
    the asymptotic solution but exact (oracle or sampled) frequencies can be
    passed instead. Equals the expected absolute disparity exactly when the
    gap's sign is constant over the set.
    """
    ds = query.dataset
    if q is None:
        q = flip_probabilities(query).q
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (ds.n,):
        raise ValueError(f"q must have length {ds.n}")
    h0, h1 = metric_coefficients(ds, metric)
    pred = ds.bayes_preds.astype(np.float64)
    expected_f = pred + (1.0 - 2.0 * pred) * q
    return float(h0 + h1 @ expected_f)


def expected_tolerance_used(weights, epsilon: float, q) -> float:
    """mean_i w_i q_i: the set-average used tolerance implied by flip probabilities.

    With the asymptotic q this equals eps by the defining equation of C;
    exact finite-N frequencies give a value strictly below eps. ``epsilon``
    is the reference tolerance and is not used to clamp the result.
    """
    w = np.asarray(weights, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if w.shape != q.shape:
        raise ValueError("weights and q must have the same length")
    return float(np.mean(w * q))


def uniform_closed_forms(epsilon: float) -> tuple[float, float]:
    """(pi/sqrt(12 eps), exp(pi sqrt(eps/3))): the uniform-weight C approximation
    and the strict upper bound on B.
    """
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return float(np.pi / np.sqrt(12.0 * epsilon)), float(np.exp(np.pi * np.sqrt(epsilon / 3.0)))
