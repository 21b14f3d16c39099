"""Feature-adjacency matrices for the graph-based rankers.

Three builders:

* ``build_infs_unsup`` — unsupervised: pairwise max of normalized standard
  deviations blended with rank-correlation distance.
* ``build_ecfs`` — supervised: outer product of Fisher scores and mutual
  information blended with a pairwise dispersion matrix.
* ``build_infs_sup`` — supervised rank-1: per-feature discriminativeness
  vector s (mean of Fisher, t-test complement and |Pearson| against the
  labels), paired as A = s s^T.
"""

from __future__ import annotations

from dataclasses import dataclass
import csv
import json

import numpy as np

from .dataset import Dataset, sum_normalize
from .stats import ClassSplit, average_ranks, fisher_score, mutual_information, pearson, two_sample_t_pvalue

METHODS = ("infs_unsup", "ecfs", "infs_sup")


@dataclass(frozen=True)
class AdjacencyMatrix:
    """n x n nonnegative feature-relation matrix with build provenance."""

    entries: np.ndarray
    method: str
    alpha: float | None = None
    bins: int | None = None

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.all(np.isfinite(entries)):
            raise ValueError("adjacency entries must be finite")
        if entries.min() < 0:
            raise ValueError("adjacency entries must be nonnegative")
        entries = entries.copy()
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def save_adjacency(a: AdjacencyMatrix, csv_path, sidecar_path) -> None:
    """Row-major CSV dump plus a JSON sidecar with method/alpha/bins."""
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        for row in a.entries:
            writer.writerow([repr(float(v)) for v in row])
    meta = {"schema": "1", "method": a.method, "alpha": a.alpha, "bins": a.bins, "n": a.n}
    with open(sidecar_path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def spearman_abs_matrix(values: np.ndarray) -> np.ndarray:
    """|Spearman| over all column pairs via one rank transform and a GEMM.

    Matches stats.spearman entrywise; constant columns get correlation 0
    everywhere, including on the diagonal.
    """
    T, n = values.shape
    ranks = np.empty((T, n), dtype=np.float64)
    for j in range(n):
        ranks[:, j] = average_ranks(values[:, j])
    ranks -= ranks.mean(axis=0)
    norms = np.sqrt((ranks**2).sum(axis=0))
    ok = norms > 0
    ranks[:, ok] /= norms[ok]
    ranks[:, ~ok] = 0.0
    corr = np.abs(ranks.T @ ranks)
    np.fill_diagonal(corr, np.where(ok, 1.0, 0.0))
    return np.minimum(corr, 1.0)


def normalized_std(values: np.ndarray) -> np.ndarray:
    """Per-column sample std divided by the maximum over columns."""
    sig = np.std(values, axis=0, ddof=1)
    smax = sig.max()
    return sig / smax if smax > 0 else np.zeros_like(sig)


def build_infs_unsup(d: Dataset, alpha: float) -> AdjacencyMatrix:
    """a_ij = alpha * max(sig_i, sig_j) + (1 - alpha) * (1 - |spearman_ij|).

    sig is the per-feature sample std normalized by the maximum std over
    all features, so both terms live in [0, 1].
    """
    _check_alpha(alpha)
    sig = normalized_std(d.values)
    dispersion = np.maximum.outer(sig, sig)
    redundancy = 1.0 - spearman_abs_matrix(d.values)
    return AdjacencyMatrix(
        entries=alpha * dispersion + (1.0 - alpha) * redundancy,
        method="infs_unsup",
        alpha=alpha,
    )


def minmax_scale(v: np.ndarray) -> np.ndarray:
    """Scale to [0, 1]; a constant vector maps to zeros."""
    v = np.asarray(v, dtype=np.float64)
    lo, hi = v.min(), v.max()
    if hi <= lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def _class_partitions(d: Dataset) -> list[np.ndarray]:
    """Boolean masks, one per class in ascending label order."""
    if d.labels is None:
        raise ValueError("supervised adjacency requires labels")
    classes = np.unique(d.labels)
    if classes.size < 2:
        raise ValueError("supervised adjacency requires at least 2 classes")
    return [d.labels == c for c in classes]


def _one_vs_rest(d: Dataset, metric) -> np.ndarray:
    """Average a binary per-feature metric over one-vs-rest class splits.

    For two classes this reduces to a single split (the two one-vs-rest
    passes are mirror images, and every metric used here is symmetric up
    to the orientation handled by the caller).
    """
    masks = _class_partitions(d)
    if len(masks) == 2:
        masks = masks[:1]
    out = np.zeros(d.n_features)
    for mask in masks:
        if mask.sum() < 2 or (~mask).sum() < 2:
            raise ValueError("each one-vs-rest split needs >= 2 samples per side")
        for j in range(d.n_features):
            col = d.values[:, j]
            out[j] += metric(ClassSplit(positive=col[mask], negative=col[~mask]), mask)
    return out / len(masks)


def feature_fisher_scores(d: Dataset) -> np.ndarray:
    """Per-feature Fisher criterion (one-vs-rest averaged beyond 2 classes)."""
    return _one_vs_rest(d, lambda split, _mask: fisher_score(split))


def feature_mutual_information(d: Dataset, bins: int = 16) -> np.ndarray:
    """Per-feature mutual information with the class labels, in bits."""
    if d.labels is None:
        raise ValueError("mutual information requires labels")
    return np.array([mutual_information(d.values[:, j], d.labels, bins) for j in range(d.n_features)])


def build_ecfs(d: Dataset, alpha: float, bins: int = 16) -> AdjacencyMatrix:
    """A = alpha * (f m^T) + (1 - alpha) * max(sig_i, sig_j).

    Features are first sum-normalized; f (Fisher) and m (mutual
    information) are min-max scaled to [0, 1] before the outer product.
    """
    _check_alpha(alpha)
    if d.labels is None:
        raise ValueError("ecfs requires labels")
    if d.n_samples < 4:
        raise ValueError("ecfs needs at least 4 samples")
    norm, _ = sum_normalize(d)
    f = minmax_scale(feature_fisher_scores(norm))
    m = minmax_scale(feature_mutual_information(norm, bins))
    sig = np.std(norm.values, axis=0, ddof=1)
    dispersion = np.maximum.outer(sig, sig)
    return AdjacencyMatrix(
        entries=alpha * np.outer(f, m) + (1.0 - alpha) * dispersion,
        method="ecfs",
        alpha=alpha,
        bins=bins,
    )


def discriminativeness_vector(d: Dataset) -> np.ndarray:
    """Mean of three min-max scaled class-separation metrics per feature.

    The metrics are the Fisher criterion, 1 - p of the pooled two-sample t
    test (larger = more separating) and |Pearson| of the feature against the
    0/1 class encoding; multi-class input is averaged one-vs-rest.
    """
    fisher = _one_vs_rest(d, lambda split, _mask: fisher_score(split))
    t_conf = _one_vs_rest(d, lambda split, _mask: 1.0 - two_sample_t_pvalue(split))
    corr = _one_vs_rest(d, lambda split, mask: abs(pearson(np.concatenate([split.positive, split.negative]),
                                                           np.concatenate([np.ones(split.positive.size),
                                                                           np.zeros(split.negative.size)]))))
    return (minmax_scale(fisher) + minmax_scale(t_conf) + minmax_scale(corr)) / 3.0


def build_infs_sup(d: Dataset) -> AdjacencyMatrix:
    """Rank-1 supervised adjacency A = s s^T from the per-feature s vector."""
    s = discriminativeness_vector(d)
    return AdjacencyMatrix(entries=np.outer(s, s), method="infs_sup")


def _check_alpha(alpha: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
