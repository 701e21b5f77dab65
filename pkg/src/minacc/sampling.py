"""Monte Carlo estimation of the minimum accuracy by axis subsampling.

Evaluating every axis of a d-dimensional feature space is exact but costs
O(d N log N); for Pauli-style spaces d grows as 4^n.  The estimators here
evaluate only a random subset of axes.  Because the subset maximum can never
exceed the full maximum, every estimate is itself a certified lower bound,
and uniform sampling without replacement admits exact hypergeometric
statements about how likely the sample is to contain a high-accuracy axis.

Three strategies trade prior knowledge for adaptivity:

* conservative: fixed sample size t = ceil(log(1/delta) / p) from an assumed
  lower bound p on the fraction of good axes;
* pilot: estimate that fraction from a pilot sample (target = 75th
  percentile of pilot accuracies, nearest-rank), then complete to the
  implied size;
* adaptive: batch-incremental with patience, stability-window, and budget
  stopping rules, with no a priori coverage guarantee.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .axiscore import AxisResult, FeatureMatrix, axis_accuracy, r_min_deterministic

_STABILITY_WINDOW_DEFAULT = 5


class EstimatorMethod(Enum):
    DETERMINISTIC = "deterministic"
    CONSERVATIVE = "conservative"
    PILOT = "pilot"
    ADAPTIVE = "adaptive"


class StopReason(Enum):
    FIXED_SIZE_REACHED = "fixed_size_reached"
    CONVERGED = "converged"
    STABLE = "stable"
    BUDGET_EXHAUSTED = "budget_exhausted"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class CoverageQuery:
    """Inputs of a coverage question: population d, good fraction p, sample size t."""

    d: int
    p: float
    t: int
    delta: float = 0.05
    eta: float | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("population d must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("fraction p must lie in [0, 1]")
        if self.t < 0:
            raise ValueError("sample size t must be >= 0")
        if self.t > self.d:
            raise ValueError("sample exceeds population")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("failure probability delta must lie in (0, 1)")


def _good_axis_count(d: int, p: float) -> int:
    # floor(p * d); the tiny slack guards against p values whose binary
    # representation puts an integral product a hair below the integer.
    return int(math.floor(p * d + 1e-9))


def coverage_probability_exact(query: CoverageQuery) -> float:
    """Exact probability that a uniform without-replacement sample of t axes
    contains at least one of the k = floor(p*d) good axes.

    Computed as 1 - C(d-k, t)/C(d, t) via a running product of t factors in
    (0, 1], so no factorials and no overflow at any scale.
    """
    k = _good_axis_count(query.d, query.p)
    if k == 0:
        if query.p > 0.0:
            warnings.warn(
                "p * d < 1: the prior admits no good axes at this granularity",
                stacklevel=2,
            )
        return 0.0
    if query.t > query.d - k:
        return 1.0
    miss = 1.0
    for j in range(query.t):
        miss *= (query.d - k - j) / (query.d - j)
    return 1.0 - miss


def coverage_probability_bound(query: CoverageQuery) -> float:
    """Bernoulli lower bound 1 - (1-p)^t on the exact coverage probability.

    Uses the effective fraction floor(p*d)/d rather than the raw p, so the
    bound refers to the same good-axis count as the exact formula.  With a raw
    non-integral p*d the inequality bound <= exact can fail outright (for
    d=10, p=0.25, t=1 the exact probability is 2/10 but 1-(1-p)^t is 0.25);
    in the intended use p is a survival-function value, making p*d integral
    and the two conventions identical.
    """
    p_eff = _good_axis_count(query.d, query.p) / query.d
    return 1.0 - (1.0 - p_eff) ** query.t


def sample_size(p: float, delta: float) -> int:
    """Smallest certified sample size: ceil(log(1/delta) / p).

    Sampling that many axes uniformly without replacement guarantees, with
    probability at least 1 - delta, at least one axis from any group making
    up a fraction >= p of the population.  Callers that know d should clamp
    the result to d.
    """
    if p <= 0.0:
        raise ValueError("prior excludes good axes (p must be > 0)")
    if p > 1.0:
        raise ValueError("fraction p must lie in (0, 1]")
    if not 0.0 < delta < 1.0:
        raise ValueError("failure probability delta must lie in (0, 1)")
    return int(math.ceil(math.log(1.0 / delta) / p))


@dataclass(frozen=True)
class SurvivalFunction:
    """Fraction of axes with accuracy at least eta, as a function of eta."""

    thresholds: np.ndarray        # sorted unique accuracy values
    values: np.ndarray            # S(eta) at each threshold
    source_accuracies: np.ndarray

    def __call__(self, eta: float) -> float:
        # first grid threshold >= eta carries the answer; S is 0 past the max
        idx = int(np.searchsorted(self.thresholds, eta, side="left"))
        if idx == self.thresholds.size:
            return 0.0
        return float(self.values[idx])


def survival_function(all_axis_accuracies) -> SurvivalFunction:
    acc = np.asarray(all_axis_accuracies, dtype=np.float64)
    if acc.ndim != 1 or acc.size == 0:
        raise ValueError("need a non-empty accuracy vector")
    srt = np.sort(acc)
    thresholds = np.unique(srt)
    d = acc.size
    values = (d - np.searchsorted(srt, thresholds, side="left")) / d
    return SurvivalFunction(thresholds=thresholds, values=values, source_accuracies=acc)


class _AxisSampler:
    """Incremental uniform sampling of distinct indices from range(d).

    Partial Fisher-Yates with a sparse swap map: O(draws) memory, and
    successive draws extend the same without-replacement stream, which is
    what the pilot completion stage and adaptive batches need.
    """

    def __init__(self, d: int, seed):
        if d < 1:
            raise ValueError("population d must be >= 1")
        self._d = d
        self._rng = np.random.default_rng(seed)
        self._swaps: dict[int, int] = {}
        self._pos = 0

    @property
    def drawn(self) -> int:
        return self._pos

    @property
    def remaining(self) -> int:
        return self._d - self._pos

    def draw(self, count: int) -> list[int]:
        if count < 0 or self._pos + count > self._d:
            raise ValueError("sample exceeds population")
        out = []
        for _ in range(count):
            j = self._pos
            r = int(self._rng.integers(j, self._d))
            v_j = self._swaps.get(j, j)
            v_r = self._swaps.get(r, r)
            out.append(v_r)
            self._swaps[r] = v_j
            self._swaps[j] = v_r
            self._pos += 1
        return out


def sample_axes(d: int, t: int, rng_seed) -> list[int]:
    """t distinct indices, uniform over t-subsets of range(d); deterministic per seed."""
    return _AxisSampler(d, rng_seed).draw(t)


@dataclass(frozen=True)
class PilotStats:
    eta_pilot: float
    p_hat: float
    t_required: int


@dataclass(frozen=True)
class EstimateResult:
    """Outcome of a minimum-accuracy estimate.

    ``r_hat`` equals the max accuracy over ``axis_results`` and, by the
    subset argument, never exceeds the exact full-scan value.  For the
    deterministic method ``axis_results`` holds only the winning axis and
    the full per-axis vector is exposed as ``all_axis_accuracies``.
    """

    r_hat: float
    sampled_axes: list[int]
    axis_results: list[AxisResult]
    method: EstimatorMethod
    stopping_reason: StopReason
    axes_evaluated: int
    pilot_stats: PilotStats | None = None
    all_axis_accuracies: np.ndarray | None = None


def _column_access(features):
    """(sample_count, axis_count, column_fn) for eager matrices or lazy sources."""
    if isinstance(features, FeatureMatrix):
        return features.sample_count, features.axis_count, features.column
    if hasattr(features, "column") and hasattr(features, "axis_count"):
        return features.sample_count, features.axis_count, features.column
    mat = np.asarray(features, dtype=np.float64)
    if mat.ndim != 2 or mat.size == 0:
        raise ValueError("empty dataset: feature matrix must be non-empty N x d")
    return mat.shape[0], mat.shape[1], lambda i: mat[:, i]


def _evaluate_axes(column, labels, axes) -> list[AxisResult]:
    return [axis_accuracy(column(i), labels, axis_index=i) for i in axes]


def _best(results) -> AxisResult:
    # integer-count comparison; ties keep the earlier (first-sampled) axis
    return max(results, key=lambda r: r.correct_count)


def deterministic_estimate(features, labels) -> EstimateResult:
    """Exhaustive scan wrapped in the common estimator result shape."""
    _, d, column = _column_access(features)
    if isinstance(features, FeatureMatrix) or isinstance(features, np.ndarray):
        r_min, best, all_acc = r_min_deterministic(features, labels)
    else:
        mat = np.column_stack([column(i) for i in range(d)])
        r_min, best, all_acc = r_min_deterministic(mat, labels)
    return EstimateResult(
        r_hat=r_min,
        sampled_axes=list(range(d)),
        axis_results=[best],
        method=EstimatorMethod.DETERMINISTIC,
        stopping_reason=StopReason.EXHAUSTED,
        axes_evaluated=d,
        all_axis_accuracies=all_acc,
    )


def conservative_estimate(features, labels, p_conservative: float, delta: float, rng_seed) -> EstimateResult:
    """Fixed-size estimate: t = ceil(log(1/delta)/p_conservative) axes (clamped to d)."""
    _, d, column = _column_access(features)
    t = min(sample_size(p_conservative, delta), d)
    axes = sample_axes(d, t, rng_seed)
    results = _evaluate_axes(column, labels, axes)
    return EstimateResult(
        r_hat=_best(results).accuracy,
        sampled_axes=axes,
        axis_results=results,
        method=EstimatorMethod.CONSERVATIVE,
        stopping_reason=StopReason.FIXED_SIZE_REACHED,
        axes_evaluated=t,
    )


def pilot_estimate(
    features,
    labels,
    n_pilot: int = 100,
    delta: float = 0.05,
    cap_fraction: float = 0.01,
    rng_seed=None,
) -> EstimateResult:
    """Two-stage estimate: learn the good-axis fraction from a pilot sample.

    Stage 1 draws ``n_pilot`` axes and sets the target accuracy eta to the
    nearest-rank 75th percentile of the pilot accuracies (ascending index
    ceil(0.75 * n_pilot)), so the estimated fraction p_hat of pilot axes at
    or above eta is always >= 0.25.  Stage 2 completes the sample, without
    replacement from the unexplored axes, up to
    min(ceil(log(1/delta)/p_hat), ceil(cap_fraction * d), d).
    """
    n, d, column = _column_access(features)
    if not 1 <= n_pilot <= d:
        raise ValueError("sample exceeds population: n_pilot must lie in [1, d]")
    if not 0.0 < cap_fraction <= 1.0:
        raise ValueError("cap_fraction must lie in (0, 1]")

    sampler = _AxisSampler(d, rng_seed)
    axes = sampler.draw(n_pilot)
    results = _evaluate_axes(column, labels, axes)

    counts = np.sort(np.array([r.correct_count for r in results], dtype=np.int64))
    eta_count = int(counts[math.ceil(0.75 * n_pilot) - 1])
    eta = eta_count / n
    p_hat = float(np.sum(counts >= eta_count)) / n_pilot
    t_required = sample_size(p_hat, delta)

    cap = math.ceil(cap_fraction * d)
    budget = min(t_required, cap, d)
    extra = budget - n_pilot
    if extra > 0:
        more = sampler.draw(extra)
        axes = axes + more
        results = results + _evaluate_axes(column, labels, more)

    total = len(axes)
    if total >= d:
        reason = StopReason.EXHAUSTED
    elif total >= t_required:
        reason = StopReason.FIXED_SIZE_REACHED
    else:
        reason = StopReason.BUDGET_EXHAUSTED
    return EstimateResult(
        r_hat=_best(results).accuracy,
        sampled_axes=axes,
        axis_results=results,
        method=EstimatorMethod.PILOT,
        stopping_reason=reason,
        axes_evaluated=total,
        pilot_stats=PilotStats(eta_pilot=eta, p_hat=p_hat, t_required=t_required),
    )


def adaptive_estimate(
    features,
    labels,
    batch_size: int = 40,
    patience: int = 3,
    stability_eps: float = 1e-3,
    budget_fraction: float = 0.01,
    rng_seed=None,
    stability_window: int = _STABILITY_WINDOW_DEFAULT,
) -> EstimateResult:
    """Batch-incremental estimate with empirical stopping rules.

    After each batch the rules are checked in order: all axes evaluated
    (EXHAUSTED), budget ceil(budget_fraction * d) reached (BUDGET_EXHAUSTED),
    no strict improvement of the running best for ``patience`` consecutive
    batches (CONVERGED), best-value spread over the last
    ``stability_window`` batch-ends at most ``stability_eps`` (STABLE).
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    if patience < 1:
        raise ValueError("patience must be >= 1")
    if stability_eps < 0:
        raise ValueError("stability_eps must be >= 0")
    if not 0.0 < budget_fraction <= 1.0:
        raise ValueError("budget_fraction must lie in (0, 1]")
    if stability_window < 2:
        raise ValueError("stability_window must be >= 2")

    n, d, column = _column_access(features)
    budget = math.ceil(budget_fraction * d)
    sampler = _AxisSampler(d, rng_seed)

    axes: list[int] = []
    results: list[AxisResult] = []
    best_count = -1
    no_improve = 0
    history: list[float] = []

    while True:
        take = min(batch_size, budget - len(axes), d - len(axes))
        batch = sampler.draw(take)
        batch_results = _evaluate_axes(column, labels, batch)
        axes.extend(batch)
        results.extend(batch_results)

        batch_best = max(r.correct_count for r in batch_results)
        if batch_best > best_count:
            best_count = batch_best
            no_improve = 0
        else:
            no_improve += 1
        history.append(best_count / n)

        if len(axes) >= d:
            reason = StopReason.EXHAUSTED
            break
        if len(axes) >= budget:
            reason = StopReason.BUDGET_EXHAUSTED
            break
        if no_improve >= patience:
            reason = StopReason.CONVERGED
            break
        window = history[-stability_window:]
        if len(history) >= stability_window and max(window) - min(window) <= stability_eps:
            reason = StopReason.STABLE
            break

    return EstimateResult(
        r_hat=_best(results).accuracy,
        sampled_axes=axes,
        axis_results=results,
        method=EstimatorMethod.ADAPTIVE,
        stopping_reason=reason,
        axes_evaluated=len(axes),
    )
