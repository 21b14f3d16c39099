"""Scalar statistical kernels used by the adjacency builders and baselines.

Conventions, fixed across the package: sample (n-1 divisor) variances,
average ranks for ties, correlations defined as 0 when either argument has
zero variance, and base-2 logarithms for information measures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc
from scipy.stats import rankdata

FISHER_EPS = 1e-12


@dataclass(frozen=True)
class ClassSplit:
    """Feature values of two classes, for class-separation statistics."""

    positive: np.ndarray
    negative: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "positive", np.asarray(self.positive, dtype=np.float64))
        object.__setattr__(self, "negative", np.asarray(self.negative, dtype=np.float64))


def std_dev(x) -> float:
    """Sample standard deviation (n-1 divisor)."""
    x = np.asarray(x, dtype=np.float64)
    if x.size < 2:
        raise ValueError("std_dev needs at least 2 values")
    return float(np.std(x, ddof=1))


def average_ranks(x) -> np.ndarray:
    """1-based ranks with ties replaced by their average rank."""
    return rankdata(np.asarray(x, dtype=np.float64), method="average")


def _corr(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    nx = np.sqrt(np.dot(xc, xc))
    ny = np.sqrt(np.dot(yc, yc))
    if nx == 0.0 or ny == 0.0:
        return 0.0  # no measurable association for constant input
    r = float(np.dot(xc, yc) / (nx * ny))
    return min(1.0, max(-1.0, r))


def _check_pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 paired values")
    return x, y


def pearson(x, y) -> float:
    """Sample Pearson correlation; 0 if either input is constant."""
    x, y = _check_pair(x, y)
    return _corr(x, y)


def spearman(x, y) -> float:
    """Rank correlation: Pearson correlation of average ranks."""
    x, y = _check_pair(x, y)
    return _corr(average_ranks(x), average_ranks(y))


def fisher_score(split: ClassSplit) -> float:
    """Squared mean separation over summed within-class sample variances.

    A tiny epsilon in the denominator keeps the score defined (and zero)
    when both classes are constant with equal means.
    """
    pos, neg = split.positive, split.negative
    if pos.size < 2 or neg.size < 2:
        raise ValueError("fisher_score needs at least 2 samples per class")
    num = (pos.mean() - neg.mean()) ** 2
    den = np.var(pos, ddof=1) + np.var(neg, ddof=1) + FISHER_EPS
    return float(num / den)


def mutual_information(x, labels, bins: int = 16) -> float:
    """Plug-in mutual information (bits) between a binned feature and labels.

    The feature is discretized into equal-width bins over [min, max]; the
    joint histogram against the discrete labels gives the plug-in estimate.
    Empty cells contribute 0.
    """
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels)
    if x.shape != labels.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {labels.shape}")
    if bins < 2:
        raise ValueError("bins must be >= 2")
    lo, hi = x.min(), x.max()
    if hi <= lo:
        return 0.0
    cells = np.minimum(((x - lo) / (hi - lo) * bins).astype(np.int64), bins - 1)
    _, label_idx = np.unique(labels, return_inverse=True)
    n_classes = label_idx.max() + 1
    joint = np.zeros((bins, n_classes))
    np.add.at(joint, (cells, label_idx), 1.0)
    joint /= joint.sum()
    px = joint.sum(axis=1, keepdims=True)
    py = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    mi = float(np.sum(joint[nz] * np.log2(joint[nz] / (px @ py)[nz])))
    return max(mi, 0.0)


def two_sample_t_pvalue(split: ClassSplit) -> float:
    """Two-sided p-value of the pooled-variance two-sample t statistic.

    Student t with n1 + n2 - 2 degrees of freedom, evaluated through the
    regularized incomplete beta function.  Zero pooled variance gives p = 1
    for equal means (null exactly satisfied) and p = 0 otherwise.
    """
    pos, neg = split.positive, split.negative
    n1, n2 = pos.size, neg.size
    if n1 < 2 or n2 < 2:
        raise ValueError("t test needs at least 2 samples per class")
    df = n1 + n2 - 2
    pooled = ((n1 - 1) * np.var(pos, ddof=1) + (n2 - 1) * np.var(neg, ddof=1)) / df
    diff = pos.mean() - neg.mean()
    if pooled == 0.0:
        return 1.0 if diff == 0.0 else 0.0
    t = diff / np.sqrt(pooled * (1.0 / n1 + 1.0 / n2))
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))
