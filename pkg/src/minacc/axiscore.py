"""Axis-aligned threshold scans and the exact minimum accuracy of a feature matrix.

The central quantity is the best empirical accuracy achievable by a
single-axis threshold rule: pick one feature coordinate, one cut point, and
an optional global sign flip.  Maximizing over cut points gives the per-axis
optimum, and maximizing that over all axes gives the minimum accuracy of the
feature matrix, a certified lower bound on what any linear classifier in the
same feature space can reach on the training set.

All accuracy comparisons are done on integer correct-counts; the floating
``accuracy`` values are derived from them and never compared with tolerances
internally, so results are exact multiples of 1/N.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

# Column chunk width for the full-matrix scan; keeps the working set of the
# vectorized sweep a few MB regardless of d.
_SCAN_CHUNK = 2048


class Orientation(Enum):
    """Which label the below-threshold side receives.

    A point exactly at the threshold always counts as "at or above".
    """

    BELOW_IS_PLUS = "below_is_plus"    # a <  tau -> +1,  a >= tau -> -1
    BELOW_IS_MINUS = "below_is_minus"  # a <  tau -> -1,  a >= tau -> +1


def _as_label_array(labels) -> np.ndarray:
    y = np.asarray(labels)
    if y.ndim != 1 or y.size == 0:
        raise ValueError("empty dataset: need a non-empty 1-D label vector")
    if not np.all(np.abs(y) == 1):
        raise ValueError("labels must be -1 or +1")
    return y.astype(np.int64)


@dataclass(frozen=True)
class LabeledDataset:
    """Raw inputs (N x m) with binary labels in {-1, +1}."""

    inputs: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.inputs, dtype=np.float64)
        if x.ndim != 2 or x.shape[0] == 0:
            raise ValueError("empty dataset: inputs must be a non-empty N x m matrix")
        y = _as_label_array(self.labels)
        if y.shape[0] != x.shape[0]:
            raise ValueError("inputs and labels disagree on N")
        object.__setattr__(self, "inputs", x)
        object.__setattr__(self, "labels", y)

    @property
    def sample_count(self) -> int:
        return self.inputs.shape[0]

    @property
    def input_dim(self) -> int:
        return self.inputs.shape[1]

    @property
    def positive_count(self) -> int:
        return int(np.sum(self.labels == 1))

    @property
    def negative_count(self) -> int:
        return int(np.sum(self.labels == -1))


@dataclass(frozen=True)
class FeatureMatrix:
    """Embedded dataset: entry [k, i] is the value of feature axis i on sample k."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise ValueError("empty dataset: feature matrix must be non-empty N x d")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite feature values in matrix")
        object.__setattr__(self, "values", v)

    @property
    def sample_count(self) -> int:
        return self.values.shape[0]

    @property
    def axis_count(self) -> int:
        return self.values.shape[1]

    def column(self, axis_index: int) -> np.ndarray:
        if not 0 <= axis_index < self.axis_count:
            raise ValueError(f"axis {axis_index} out of range [0, {self.axis_count})")
        return self.values[:, axis_index]


@dataclass(frozen=True)
class AxisResult:
    """Optimal threshold rule along one axis and the accuracy it achieves."""

    axis_index: int
    best_threshold: float
    orientation: Orientation
    accuracy: float
    correct_count: int


@dataclass(frozen=True)
class ThresholdClassifier:
    """Single-axis threshold rule; ties a == threshold go to the at-or-above side."""

    axis_index: int
    threshold: float
    orientation: Orientation

    def predict_values(self, values: np.ndarray) -> np.ndarray:
        """Predict +/-1 from the raw values of this classifier's axis."""
        above = np.asarray(values, dtype=np.float64) >= self.threshold
        if self.orientation is Orientation.BELOW_IS_MINUS:
            return np.where(above, 1, -1).astype(np.int64)
        return np.where(above, -1, 1).astype(np.int64)

    def predict(self, features: FeatureMatrix) -> np.ndarray:
        return self.predict_values(features.column(self.axis_index))


def _midpoint(lo: float, hi: float) -> float:
    # Representative cut strictly above lo.  For adjacent doubles the exact
    # midpoint can round down onto lo; nextafter then yields hi, and the
    # at-or-above tie rule keeps the counts consistent.
    mid = 0.5 * (lo + hi)
    if not mid > lo:
        mid = float(np.nextafter(lo, hi))
    return float(mid)


def axis_accuracy(values, labels, axis_index: int = 0) -> AxisResult:
    """Best threshold rule along one axis.

    Candidate thresholds are one sentinel strictly below the minimum value
    plus the midpoint of every pair of distinct consecutive sorted values;
    accuracy is piecewise constant in the threshold, so these candidates
    attain the supremum.  Both orientations are evaluated at each candidate.

    Ties are broken toward the lowest threshold, then toward
    ``BELOW_IS_PLUS``, so the result is deterministic.

    Runs in O(N log N): one sort plus a prefix-count sweep.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("empty dataset: need a non-empty 1-D value vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite feature values")
    y = _as_label_array(labels)
    if y.shape != v.shape:
        raise ValueError("values and labels disagree on N")

    n = v.size
    order = np.argsort(v, kind="stable")
    sv = v[order]
    plus = y[order] == 1
    n_plus = int(plus.sum())
    n_minus = n - n_plus

    # Sentinel below the minimum: everything lands at-or-above, so the two
    # orientations realize the two single-class assignments.
    sentinel = float(sv[0] - 1.0)
    if n_minus >= n_plus:
        best_count, best_tau, best_orient = n_minus, sentinel, Orientation.BELOW_IS_PLUS
    else:
        best_count, best_tau, best_orient = n_plus, sentinel, Orientation.BELOW_IS_MINUS

    if n > 1:
        pb = np.cumsum(plus)[:-1]          # positives among the first j+1 sorted points
        below = np.arange(1, n)            # points strictly below the candidate cut
        count_plus_side = 2 * pb - below + n_minus   # below predicted +1
        count_minus_side = below - 2 * pb + n_plus   # below predicted -1
        cand = np.maximum(count_plus_side, count_minus_side)
        cand[sv[:-1] >= sv[1:]] = -1       # duplicate values collapse the interval
        j = int(np.argmax(cand))           # first max: lowest threshold wins ties
        if cand[j] > best_count:
            best_count = int(cand[j])
            best_tau = _midpoint(float(sv[j]), float(sv[j + 1]))
            if count_plus_side[j] >= count_minus_side[j]:
                best_orient = Orientation.BELOW_IS_PLUS
            else:
                best_orient = Orientation.BELOW_IS_MINUS

    return AxisResult(
        axis_index=axis_index,
        best_threshold=best_tau,
        orientation=best_orient,
        accuracy=best_count / n,
        correct_count=int(best_count),
    )


def _best_counts_per_axis(values: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Vectorized best correct-count per column of an N x c block."""
    n = values.shape[0]
    plus_mask = labels == 1
    n_plus = int(plus_mask.sum())
    n_minus = n - n_plus

    best = np.full(values.shape[1], max(n_plus, n_minus), dtype=np.int64)
    if n == 1:
        return best

    order = np.argsort(values, axis=0, kind="stable")
    sv = np.take_along_axis(values, order, axis=0)
    pb = np.cumsum(plus_mask[order], axis=0)[:-1]
    below = np.arange(1, n, dtype=np.int64)[:, None]
    cand = np.maximum(2 * pb - below + n_minus, below - 2 * pb + n_plus)
    cand[sv[:-1] >= sv[1:]] = 0
    return np.maximum(best, cand.max(axis=0))


def r_min_deterministic(features, labels):
    """Exhaustive scan over every axis: the exact minimum accuracy.

    Parameters
    ----------
    features : FeatureMatrix or ndarray of shape (N, d)
    labels : length-N vector over {-1, +1}

    Returns
    -------
    (r_min, best, all_axis_accuracies)
        ``r_min`` is the max over axes of the per-axis optimum, ``best`` the
        winning AxisResult (ties broken by lowest axis index), and
        ``all_axis_accuracies`` the full length-d vector of per-axis optima
        for survival-function analysis.
    """
    if isinstance(features, FeatureMatrix):
        mat = features.values
    else:
        mat = np.asarray(features, dtype=np.float64)
        if mat.ndim != 2 or mat.size == 0:
            raise ValueError("empty dataset: feature matrix must be non-empty N x d")
        if not np.all(np.isfinite(mat)):
            raise ValueError("non-finite feature values in matrix")
    y = _as_label_array(labels)
    if y.shape[0] != mat.shape[0]:
        raise ValueError("features and labels disagree on N")

    n, d = mat.shape
    counts = np.empty(d, dtype=np.int64)
    for start in range(0, d, _SCAN_CHUNK):
        stop = min(start + _SCAN_CHUNK, d)
        counts[start:stop] = _best_counts_per_axis(mat[:, start:stop], y)

    best_axis = int(np.argmax(counts))  # first max: lowest axis index
    best = axis_accuracy(mat[:, best_axis], y, axis_index=best_axis)
    return best.accuracy, best, counts / n


def classifier_accuracy(classifier: ThresholdClassifier, features, labels) -> float:
    """Empirical accuracy of a threshold rule: fraction of samples it labels correctly."""
    if not isinstance(features, FeatureMatrix):
        features = FeatureMatrix(np.asarray(features, dtype=np.float64))
    y = _as_label_array(labels)
    if y.shape[0] != features.sample_count:
        raise ValueError("features and labels disagree on N")
    pred = classifier.predict(features)
    return float(np.sum(pred == y)) / features.sample_count


def as_linear_classifier(classifier: ThresholdClassifier, axis_count: int):
    """Rewrite a threshold rule as a hyperplane ``sign(<w, phi> + b)``.

    Returns ``w = +e_i, b = -tau`` for ``BELOW_IS_MINUS`` and
    ``w = -e_i, b = +tau`` for ``BELOW_IS_PLUS``.  With the convention
    ``sign(0) = +1`` the hyperplane reproduces the threshold rule everywhere
    except, for the flipped orientation only, on points lying exactly at the
    threshold; the scan never places a threshold on a data value, so the two
    forms agree on the data they were fit to.
    """
    if not 0 <= classifier.axis_index < axis_count:
        raise ValueError(f"axis {classifier.axis_index} out of range [0, {axis_count})")
    w = np.zeros(axis_count, dtype=np.float64)
    if classifier.orientation is Orientation.BELOW_IS_MINUS:
        w[classifier.axis_index] = 1.0
        b = -classifier.threshold
    else:
        w[classifier.axis_index] = -1.0
        b = classifier.threshold
    return w, float(b)


def linear_predict(weights: np.ndarray, bias: float, features) -> np.ndarray:
    """Predict +/-1 from a hyperplane; decision value exactly 0 maps to +1."""
    mat = features.values if isinstance(features, FeatureMatrix) else np.asarray(features, dtype=np.float64)
    z = mat @ np.asarray(weights, dtype=np.float64) + bias
    return np.where(z >= 0, 1, -1).astype(np.int64)
