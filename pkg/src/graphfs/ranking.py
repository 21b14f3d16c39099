"""Feature scores and rankings from adjacency matrices.

Two scoring engines:

* ``infs_scores`` sums the energies of all feature paths of all lengths.
  With r chosen below 1/rho(A) the infinite sum is the geometric series of
  r*A, so the whole computation collapses to one dense linear solve:
  solving (I - rA) x = e gives the score vector x - e.
* ``ec_scores`` is the leading-eigenvector (centrality) ranking, by power
  iteration.

``truncated_geometric`` is the brute-force partial sum kept as an
independent oracle for the linear-solve path, and ``fundamental_matrix``
exposes the same solve at r = 1 for sub-stochastic matrices, where the
entries are expected visit counts of an absorbing chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dataset import Dataset
from .graph import (
    build_ecfs,
    build_infs_sup,
    build_infs_unsup,
    feature_fisher_scores,
    feature_mutual_information,
)

DEFAULT_ALPHA = 0.2
DEFAULT_BINS = 16
DEFAULT_R_FACTOR = 0.9
POWER_TOL = 1e-10
POWER_MAX_ITER = 10_000

RANK_METHODS = ("infs_unsup", "infs_sup", "ecfs", "fisher", "mi")


class ConvergenceError(RuntimeError):
    """An iterative routine failed to reach its tolerance."""


class RadiusEstimate(NamedTuple):
    """Spectral-radius estimate; is_bound marks the row-sum fallback."""

    value: float
    is_bound: bool


def _as_matrix(A) -> np.ndarray:
    entries = getattr(A, "entries", A)
    entries = np.asarray(entries, dtype=np.float64)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ValueError("expected a square matrix")
    return entries


def _row_sum_bound(A: np.ndarray) -> float:
    """Upper bound on rho(A) for nonnegative A via average 2-row sums.

    max_i (A^2 e)_i / (A e)_i bounds the radius whenever all row sums are
    positive; otherwise fall back to the plain maximum row sum.
    """
    r1 = A.sum(axis=1)
    if np.all(r1 > 0):
        return float((A @ r1 / r1).max())
    return float(r1.max())


def spectral_radius(A, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> RadiusEstimate:
    """Dominant-eigenvalue magnitude of a nonnegative matrix.

    Power iteration from the all-ones vector, converged when successive
    Rayleigh quotients agree to relative tol.  If max_iter is exhausted
    (e.g. on imprimitive matrices, where the iteration cycles) the
    average-2-row-sum upper bound is returned with is_bound set.
    """
    A = _as_matrix(A)
    if A.min() < 0:
        raise ValueError("spectral_radius requires a nonnegative matrix")
    x = np.ones(A.shape[0])
    rho = 0.0
    for _ in range(max_iter):
        y = A @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            # A^k e hit zero: nonnegative A must be nilpotent, so rho = 0
            return RadiusEstimate(0.0, False)
        x = y / norm
        estimate = float(x @ (A @ x))
        if abs(estimate - rho) <= tol * abs(estimate):
            return RadiusEstimate(estimate, False)
        rho = estimate
    return RadiusEstimate(_row_sum_bound(A), True)


def truncated_geometric(A, r: float, L: int) -> np.ndarray:
    """sum_{l=1..L} (rA)^l e by repeated matrix-vector products."""
    A = _as_matrix(A)
    if L < 1:
        raise ValueError("L must be >= 1")
    v = np.ones(A.shape[0])
    acc = np.zeros(A.shape[0])
    for _ in range(L):
        v = r * (A @ v)
        acc += v
    return acc


def infs_scores(A, r_factor: float = DEFAULT_R_FACTOR) -> np.ndarray:
    """Path-energy scores: the row sums of sum_{l>=1} (rA)^l, r = r_factor/rho(A).

    Computed as x - e where (I - rA) x = e (one dense LU solve; the full
    series matrix is never materialized).  If the radius estimate was a
    fallback bound, or the solve is untrustworthy — residual above 1e-8 or
    negative scores, which the convergent series cannot produce — r is
    shrunk by 10% and the solve retried, at most 5 times.
    """
    A = _as_matrix(A)
    if A.min() < 0:
        raise ValueError("infs_scores requires a nonnegative matrix")
    n = A.shape[0]
    if not A.any():
        return np.zeros(n)
    estimate = spectral_radius(A)
    rho = estimate.value if estimate.value > 0 else _row_sum_bound(A)
    r = r_factor / rho
    e = np.ones(n)
    eye = np.eye(n)
    for _ in range(6):
        x = np.linalg.solve(eye - r * A, e)
        scores = x - e
        residual = np.max(np.abs((eye - r * A) @ x - e))
        if residual <= 1e-8 and scores.min() >= -1e-12:
            return np.maximum(scores, 0.0)
        r *= 0.9
    raise ConvergenceError(f"series solve failed to stabilize (last residual {residual:.3e})")


def fundamental_matrix(A) -> np.ndarray:
    """(I - A)^{-1} for a sub-stochastic transient block (r = 1 solve path).

    Entry (i, j) is the expected number of visits to state j of the
    absorbing chain started at state i, the initial occupancy included.
    """
    A = _as_matrix(A)
    if A.min() < 0:
        raise ValueError("fundamental_matrix requires a nonnegative matrix")
    if spectral_radius(A).value >= 1.0:
        raise ValueError("transient block must have spectral radius < 1")
    return np.linalg.solve(np.eye(A.shape[0]) - A, np.eye(A.shape[0]))


def ec_scores(A, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> np.ndarray:
    """Leading-eigenvector centrality scores, unit 1-norm, nonnegative.

    Power iteration from the uniform vector; converged when successive
    normalized iterates agree to tol in the infinity norm.
    """
    A = _as_matrix(A)
    if A.min() < 0:
        raise ValueError("ec_scores requires a nonnegative matrix")
    if not A.any():
        raise ValueError("ec_scores is undefined for an all-zero matrix")
    n = A.shape[0]
    x = np.full(n, 1.0 / n)
    residual = np.inf
    for _ in range(max_iter):
        y = A @ x
        norm = np.abs(y).sum()
        if norm == 0.0:
            raise ConvergenceError("iterate collapsed to zero (nilpotent matrix)")
        y /= norm
        residual = np.max(np.abs(y - x))
        x = y
        if residual <= tol:
            if x[np.argmax(np.abs(x))] < 0:
                x = -x
            return x
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps (last residual {residual:.3e})")


@dataclass(frozen=True)
class Ranking:
    """Per-feature scores plus the descending-score feature order."""

    scores: tuple[float, ...]
    order: tuple[int, ...]
    method: str
    params: dict = field(default_factory=dict)

    def top(self, k: int) -> tuple[int, ...]:
        return self.order[:k]

    def ranks(self) -> np.ndarray:
        """1-based rank of each feature (rank 1 = highest score)."""
        ranks = np.empty(len(self.order), dtype=np.int64)
        ranks[list(self.order)] = np.arange(1, len(self.order) + 1)
        return ranks

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "params": dict(self.params),
            "scores": list(self.scores),
            "order": list(self.order),
        }


def rank_features(scores, method: str, params: dict | None = None) -> Ranking:
    """Sort descending by score; ties broken by ascending feature index."""
    scores = np.asarray(scores, dtype=np.float64)
    bad = np.flatnonzero(np.isnan(scores))
    if bad.size:
        raise ValueError(f"NaN score at feature index {bad[0]}")
    order = np.argsort(-scores, kind="stable")
    return Ranking(
        scores=tuple(float(s) for s in scores),
        order=tuple(int(i) for i in order),
        method=method,
        params=dict(params or {}),
    )


def rank_with_method(d: Dataset, method: str, params: dict | None = None) -> Ranking:
    """Dispatch to one of the rankers: infs_unsup, infs_sup, ecfs, fisher, mi.

    Unspecified parameters default to alpha = 0.2, bins = 16,
    r_factor = 0.9.  Supervised methods (everything except infs_unsup)
    require labels.
    """
    params = dict(params or {})
    alpha = float(params.get("alpha", DEFAULT_ALPHA))
    bins = int(params.get("bins", DEFAULT_BINS))
    r_factor = float(params.get("r_factor", DEFAULT_R_FACTOR))

    if method == "infs_unsup":
        adjacency = build_infs_unsup(d, alpha)
        scores = infs_scores(adjacency, r_factor)
        used = {"alpha": alpha, "r_factor": r_factor}
    elif method == "infs_sup":
        _require_labels(d, method)
        adjacency = build_infs_sup(d)
        scores = infs_scores(adjacency, r_factor)
        used = {"r_factor": r_factor}
    elif method == "ecfs":
        _require_labels(d, method)
        adjacency = build_ecfs(d, alpha, bins)
        scores = ec_scores(adjacency)
        used = {"alpha": alpha, "bins": bins}
    elif method == "fisher":
        _require_labels(d, method)
        scores = feature_fisher_scores(d)
        used = {}
    elif method == "mi":
        _require_labels(d, method)
        scores = feature_mutual_information(d, bins)
        used = {"bins": bins}
    else:
        raise ValueError(f"unsupported method {method!r} (choose from {RANK_METHODS})")
    return rank_features(scores, method, used)


def _require_labels(d: Dataset, method: str) -> None:
    if d.labels is None:
        raise ValueError(f"method {method!r} requires labels")
