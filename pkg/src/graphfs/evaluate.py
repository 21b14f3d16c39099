"""Ranking quality harness: stability, downstream AUC, mixture recovery.

Every experiment threads a single integer seed; trial t uses seed + t, so
trials are independent and reports are bitwise-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dataset import Dataset, gen_mixture_dataset, split_stratified
from .ranking import Ranking, rank_with_method

TRAIN_FRACTION = 2.0 / 3.0

# a ranker is a method name for rank_with_method or a callable stub
Ranker = str | Callable[[Dataset, dict], Ranking]


def kuncheva(s1, s2, n: int) -> float:
    """Chance-corrected similarity of two equal-size feature subsets.

    (r n - k^2) / (k (n - k)) with r the intersection size; 1 for identical
    subsets, expectation 0 for independent random ones.
    """
    s1, s2 = set(s1), set(s2)
    k = len(s1)
    if len(s2) != k:
        raise ValueError(f"subset sizes differ: {k} vs {len(s2)}")
    if k == 0 or k >= n:
        raise ValueError(f"index undefined for k = {k} of n = {n}")
    r = len(s1 & s2)
    return (r * n - k * k) / (k * (n - k))


def roc_auc(scores, labels) -> float:
    """Area under the ROC curve, pairwise (Mann-Whitney) formulation.

    Probability that a random positive outscores a random negative, ties
    counted half.  Computed through average ranks, which is exactly the
    pairwise count.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must have equal length")
    classes = np.unique(labels)
    if classes.size != 2:
        raise ValueError(f"roc_auc needs exactly 2 classes, got {classes.size}")
    pos = labels == classes[1]
    n_pos = int(pos.sum())
    n_neg = int(scores.size - n_pos)
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(scores.size, dtype=np.float64)
    ranks[order] = np.arange(1, scores.size + 1)
    # average ranks over tied scores
    sorted_scores = scores[order]
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        if j > i:
            ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    rank_sum = ranks[pos].sum()
    return float((rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


@dataclass(frozen=True)
class LinearModel:
    """Logistic-regression scorer: weights, bias and the training loss path."""

    weights: np.ndarray
    bias: float
    losses: tuple[float, ...]

    def decision(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.weights + self.bias

    def predict_proba(self, X) -> np.ndarray:
        return _sigmoid(self.decision(X))


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _log_loss(z: np.ndarray, y: np.ndarray, w: np.ndarray, l2: float) -> float:
    # mean log(1 + exp(-y' z)) with y' = +-1, stable form, plus the ridge term
    signed = np.where(y > 0, -z, z)
    ce = np.mean(np.logaddexp(0.0, signed))
    return float(ce + 0.5 * l2 * np.dot(w, w))


def train_linear(X, y, l2: float = 1e-3, epochs: int = 200, lr: float = 1.0, seed: int = 0) -> LinearModel:
    """L2-regularized logistic regression by full-batch gradient descent.

    The learning rate is halved (at most 20 times in total) whenever a step
    would increase the loss, so the recorded loss path is non-increasing.
    The seed is threaded for interface stability; nothing here is stochastic.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError("X rows must match y length")
    del seed
    T, n = X.shape
    w = np.zeros(n)
    b = 0.0
    losses = [_log_loss(X @ w + b, y, w, l2)]
    halvings = 0
    for _ in range(epochs):
        p = _sigmoid(X @ w + b)
        grad_w = X.T @ (p - y) / T + l2 * w
        grad_b = float(np.mean(p - y))
        stepped = False
        while True:
            w_new = w - lr * grad_w
            b_new = b - lr * grad_b
            loss_new = _log_loss(X @ w_new + b_new, y, w_new, l2)
            if loss_new <= losses[-1]:
                w, b = w_new, b_new
                losses.append(loss_new)
                stepped = True
                break
            if halvings >= 20:
                break
            lr *= 0.5
            halvings += 1
        if not stepped:
            break  # no decrease possible at the smallest allowed rate
    return LinearModel(weights=w, bias=b, losses=tuple(losses))


def _binary_01(labels: np.ndarray) -> np.ndarray:
    classes = np.unique(labels)
    if classes.size != 2:
        raise ValueError(f"need exactly 2 classes, got {classes.size}")
    return (labels == classes[1]).astype(np.float64)


def trial_split(d: Dataset, seed: int, train_fraction: float = TRAIN_FRACTION) -> tuple[Dataset, Dataset]:
    """The stratified split used by one experiment trial."""
    return split_stratified(d, train_fraction, seed)


def _rank(d: Dataset, ranker: Ranker, params: dict) -> Ranking:
    if callable(ranker):
        return ranker(d, params)
    return rank_with_method(d, ranker, params)


@dataclass(frozen=True)
class EvalReport:
    """Test AUC per selected-feature cardinality, averaged over trials."""

    cardinalities: tuple[int, ...]
    auc_mean: tuple[float, ...]
    auc_std: tuple[float, ...]
    trial_count: int
    method: str
    seed: int

    def to_dict(self) -> dict:
        return {
            "schema": "1",
            "cardinalities": list(self.cardinalities),
            "auc_mean": list(self.auc_mean),
            "auc_std": list(self.auc_std),
            "trial_count": self.trial_count,
            "method": self.method,
            "seed": self.seed,
        }

    def to_csv_rows(self) -> list[list[str]]:
        rows = [["cardinality", "auc_mean", "auc_std"]]
        for m, mu, sd in zip(self.cardinalities, self.auc_mean, self.auc_std):
            rows.append([str(m), repr(mu), repr(sd)])
        return rows


def eval_pipeline(
    d: Dataset,
    method: Ranker,
    params: dict | None = None,
    cardinalities: Sequence[int] = (10,),
    trials: int = 5,
    seed: int = 0,
) -> EvalReport:
    """Rank on the train split only, classify the test split, report AUC.

    Per trial t: stratified 2/3-1/3 split with seed + t, ranking computed
    from the train partition, then for every cardinality m a logistic
    model is fit on the top-m train columns and scored on the test split.
    """
    params = dict(params or {})
    if d.labels is None:
        raise ValueError("eval_pipeline requires labels")
    cardinalities = [int(m) for m in cardinalities]
    if not cardinalities or min(cardinalities) < 1 or max(cardinalities) > d.n_features:
        raise ValueError(f"cardinalities must lie in [1, {d.n_features}]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    aucs = np.zeros((trials, len(cardinalities)))
    for t in range(trials):
        train, test = trial_split(d, seed + t)
        ranking = _rank(train, method, params)
        y_train = _binary_01(train.labels)
        y_test = _binary_01(test.labels)
        for i, m in enumerate(cardinalities):
            cols = list(ranking.top(m))
            model = train_linear(train.values[:, cols], y_train, seed=seed + t)
            aucs[t, i] = roc_auc(model.decision(test.values[:, cols]), y_test)
    return EvalReport(
        cardinalities=tuple(cardinalities),
        auc_mean=tuple(float(v) for v in aucs.mean(axis=0)),
        auc_std=tuple(float(v) for v in aucs.std(axis=0)),
        trial_count=trials,
        method=method if isinstance(method, str) else getattr(method, "__name__", "custom"),
        seed=seed,
    )


@dataclass(frozen=True)
class StabilityReport:
    """Pairwise Kuncheva indices of top-k sets over resampled rankings."""

    k: int
    trial_count: int
    pairwise: tuple[float, ...]
    mean: float
    std: float

    def to_dict(self) -> dict:
        return {
            "schema": "1",
            "k": self.k,
            "trial_count": self.trial_count,
            "pairwise": list(self.pairwise),
            "mean": self.mean,
            "std": self.std,
        }


def stability_experiment(
    d: Dataset,
    method: Ranker,
    params: dict | None = None,
    k: int = 10,
    trials: int = 10,
    seed: int = 0,
    train_fraction: float = TRAIN_FRACTION,
) -> StabilityReport:
    """Kuncheva stability of the top-k subset across stratified subsamples.

    Each trial ranks on the train side of an independent stratified split;
    train_fraction >= 1 degenerates to ranking the full dataset each time
    (useful to check that deterministic rankers score exactly 1).
    """
    params = dict(params or {})
    if not 0 < k < d.n_features:
        raise ValueError(f"k must be in (0, {d.n_features})")
    if trials < 2:
        raise ValueError("stability needs at least 2 trials")
    subsets = []
    for t in range(trials):
        sub = d if train_fraction >= 1.0 else trial_split(d, seed + t, train_fraction)[0]
        subsets.append(set(_rank(sub, method, params).top(k)))
    pairwise = [
        kuncheva(subsets[i], subsets[j], d.n_features)
        for i in range(trials)
        for j in range(i + 1, trials)
    ]
    return StabilityReport(
        k=k,
        trial_count=trials,
        pairwise=tuple(pairwise),
        mean=float(np.mean(pairwise)),
        std=float(np.std(pairwise)),
    )


@dataclass(frozen=True)
class RecoveryReport:
    """How well a ranker keeps known base features ahead of their mixtures."""

    mode: str
    method: str
    trial_count: int
    per_base_median_rank: tuple[float, ...]
    base_mean_rank: float
    mixture_mean_rank: float
    trials_base_better: int

    def to_dict(self) -> dict:
        return {
            "schema": "1",
            "mode": self.mode,
            "method": self.method,
            "trial_count": self.trial_count,
            "per_base_median_rank": list(self.per_base_median_rank),
            "base_mean_rank": self.base_mean_rank,
            "mixture_mean_rank": self.mixture_mean_rank,
            "trials_base_better": self.trials_base_better,
        }


def default_mixture_factory(mode: str, seed: int) -> Dataset:
    return gen_mixture_dataset(T=150, n_base=4, n_mix=16, mode=mode, seed=seed)


def mixture_recovery(
    mode: str,
    method: Ranker,
    params: dict | None = None,
    trials: int = 20,
    seed: int = 0,
    dataset_factory: Callable[[str, int], Dataset] = default_mixture_factory,
) -> RecoveryReport:
    """Rank freshly generated mixture datasets and track base-feature ranks.

    Per trial: generate dataset_factory(mode, seed + t), rank, record the
    1-based ranks of the base_truth columns.  trials_base_better counts the
    trials whose mean base rank beats the mean mixture rank.
    """
    params = dict(params or {})
    if trials < 1:
        raise ValueError("trials must be >= 1")
    base_ranks = []
    wins = 0
    base_means = []
    mix_means = []
    for t in range(trials):
        d = dataset_factory(mode, seed + t)
        if not d.base_truth:
            raise ValueError("dataset_factory must set base_truth")
        ranks = _rank(d, method, params).ranks()
        base = sorted(d.base_truth)
        mixture = [j for j in range(d.n_features) if j not in d.base_truth]
        base_ranks.append(ranks[base])
        bm = float(ranks[base].mean())
        mm = float(ranks[mixture].mean())
        base_means.append(bm)
        mix_means.append(mm)
        if bm < mm:
            wins += 1
    base_ranks = np.asarray(base_ranks, dtype=np.float64)
    return RecoveryReport(
        mode=mode,
        method=method if isinstance(method, str) else getattr(method, "__name__", "custom"),
        trial_count=trials,
        per_base_median_rank=tuple(float(v) for v in np.median(base_ranks, axis=0)),
        base_mean_rank=float(np.mean(base_means)),
        mixture_mean_rank=float(np.mean(mix_means)),
        trials_base_better=wins,
    )
