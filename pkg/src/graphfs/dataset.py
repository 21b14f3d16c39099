"""Dataset ingestion, normalization, stratified splitting and synthetic benchmarks.

A :class:`Dataset` is an immutable samples-by-features matrix with optional
integer class labels.  Synthetic mixture datasets additionally carry
``base_truth``, the set of column indices holding the original (unmixed)
features, so that recovery experiments can score a ranking against ground
truth.
"""

from __future__ import annotations

import csv
import importlib.resources
import json
from dataclasses import dataclass, field

import numpy as np


class DataFormatError(ValueError):
    """Raised when an input file cannot be parsed into a valid Dataset."""


@dataclass(frozen=True)
class Dataset:
    """Immutable T x n real matrix plus optional labels and metadata.

    values
        float64 array of shape (T, n); every entry finite.
    labels
        optional int64 array of length T (class ids).
    feature_names
        n unique column names.
    base_truth
        optional set of column indices that are "original" features of a
        synthetic dataset.
    """

    values: np.ndarray
    labels: np.ndarray | None = None
    feature_names: tuple[str, ...] = field(default=())
    base_truth: frozenset[int] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("values must be a 2-D matrix")
        T, n = values.shape
        if T < 2 or n < 2:
            raise ValueError(f"need at least 2 samples and 2 features, got {T}x{n}")
        if not np.all(np.isfinite(values)):
            raise ValueError("values contain NaN or infinite entries")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

        names = tuple(self.feature_names) if self.feature_names else tuple(f"f{i}" for i in range(n))
        if len(names) != n:
            raise ValueError(f"expected {n} feature names, got {len(names)}")
        if len(set(names)) != n:
            raise ValueError("feature names must be unique")
        object.__setattr__(self, "feature_names", names)

        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (T,):
                raise ValueError(f"labels length {labels.shape} does not match {T} samples")
            labels = labels.copy()
            labels.flags.writeable = False
            object.__setattr__(self, "labels", labels)

        if self.base_truth is not None:
            truth = frozenset(int(i) for i in self.base_truth)
            if truth and (min(truth) < 0 or max(truth) >= n):
                raise ValueError("base_truth indices out of range")
            object.__setattr__(self, "base_truth", truth)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def class_ids(self) -> np.ndarray:
        """Sorted distinct label values (error if unlabeled)."""
        if self.labels is None:
            raise ValueError("dataset has no labels")
        return np.unique(self.labels)


def _parse_cell(text: str, row: int, col: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise DataFormatError(f"non-numeric cell {text!r} at row {row}, column {col}") from None
    if not np.isfinite(v):
        raise DataFormatError(f"non-finite cell {text!r} at row {row}, column {col}")
    return v


def load_csv(path, label_column: str | int | None = None) -> Dataset:
    """Load a comma-separated dataset, optionally splitting off a label column.

    The file may start with a single header row; it is detected by any
    first-row cell failing to parse as a number.  Without a header the
    features are named ``f0 .. f{n-1}``.  ``label_column`` selects the label
    column by header name or by 0-based position.

    Raises :class:`DataFormatError` naming the offending row/column for
    ragged rows and non-numeric cells.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise DataFormatError(f"{path}: empty file")

    def _is_number(cell: str) -> bool:
        try:
            float(cell)
        except ValueError:
            return False
        return True

    has_header = any(not _is_number(c) for c in rows[0])
    header = [c.strip() for c in rows[0]] if has_header else None
    data_rows = rows[1:] if has_header else rows
    if not data_rows:
        raise DataFormatError(f"{path}: no data rows")

    width = len(data_rows[0])
    label_idx: int | None = None
    if label_column is not None:
        if isinstance(label_column, int):
            label_idx = label_column
            if not 0 <= label_idx < width:
                raise DataFormatError(f"label column index {label_column} out of range for {width} columns")
        else:
            if header is None or label_column not in header:
                raise DataFormatError(f"label column {label_column!r} not found in header")
            label_idx = header.index(label_column)

    values = []
    labels = [] if label_idx is not None else None
    offset = 2 if has_header else 1  # 1-based file row of the first data row
    for i, row in enumerate(data_rows):
        if len(row) != width:
            raise DataFormatError(f"ragged row {i + offset}: expected {width} cells, got {len(row)}")
        feats = []
        for j, cell in enumerate(row):
            v = _parse_cell(cell.strip(), i + offset, j)
            if j == label_idx:
                labels.append(int(v))
            else:
                feats.append(v)
        values.append(feats)

    names = None
    if header is not None:
        names = tuple(c for j, c in enumerate(header) if j != label_idx)
    matrix = np.asarray(values, dtype=np.float64)
    if matrix.shape[0] < 2 or matrix.shape[1] < 2:
        raise DataFormatError(f"need at least 2 samples and 2 features, got {matrix.shape[0]}x{matrix.shape[1]}")
    return Dataset(
        values=matrix,
        labels=np.asarray(labels, dtype=np.int64) if labels is not None else None,
        feature_names=names or (),
    )


def save_csv(d: Dataset, path, label_column: str = "label") -> None:
    """Write a Dataset back to CSV at full precision (round-trips exactly)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = list(d.feature_names)
        if d.labels is not None:
            header.append(label_column)
        writer.writerow(header)
        for i in range(d.n_samples):
            row = [repr(float(v)) for v in d.values[i]]
            if d.labels is not None:
                row.append(str(int(d.labels[i])))
            writer.writerow(row)


def save_manifest(path, mode: str, seed: int, d: Dataset) -> None:
    """Sidecar JSON recording how a synthetic dataset was generated."""
    manifest = {
        "schema": "1",
        "mode": mode,
        "seed": int(seed),
        "n_samples": d.n_samples,
        "n_features": d.n_features,
        "base_truth": sorted(d.base_truth) if d.base_truth is not None else None,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")


def sum_normalize(d: Dataset) -> tuple[Dataset, list[str]]:
    """Scale every feature column so its entries sum to 1.

    Columns containing negatives are first shifted by their minimum so the
    probabilistic reading is preserved.  All-zero columns (possibly after the
    shift) are left as zeros; their names are returned in the warning list.
    """
    values = d.values.copy()
    warnings: list[str] = []
    for j in range(values.shape[1]):
        col = values[:, j]
        lo = col.min()
        if lo < 0:
            col = col - lo
        total = col.sum()
        if total <= 0:
            values[:, j] = 0.0
            warnings.append(f"column {d.feature_names[j]!r} is constant-zero after normalization")
        else:
            values[:, j] = col / total
    return (
        Dataset(values=values, labels=d.labels, feature_names=d.feature_names, base_truth=d.base_truth),
        warnings,
    )


def split_stratified(d: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Deterministic per-class split into (train, test).

    The per-class train count is round(train_fraction * class_size), clamped
    to [1, class_size - 1] so that neither side loses a class entirely.
    """
    if d.labels is None:
        raise ValueError("stratified split requires labels")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    train_idx: list[np.ndarray] = []
    test_idx: list[np.ndarray] = []
    for cls in np.unique(d.labels):
        members = np.flatnonzero(d.labels == cls)
        if members.size < 2:
            raise ValueError(f"class {cls} has fewer than 2 samples")
        k = int(np.floor(train_fraction * members.size + 0.5))
        k = min(max(k, 1), members.size - 1)
        perm = rng.permutation(members)
        train_idx.append(np.sort(perm[:k]))
        test_idx.append(np.sort(perm[k:]))
    tr = np.sort(np.concatenate(train_idx))
    te = np.sort(np.concatenate(test_idx))
    if tr.size == 0 or te.size == 0:
        raise ValueError("train_fraction yields an empty split")

    def _subset(idx: np.ndarray) -> Dataset:
        return Dataset(
            values=d.values[idx],
            labels=d.labels[idx],
            feature_names=d.feature_names,
            base_truth=d.base_truth,
        )

    return _subset(tr), _subset(te)


def mix_columns(base: np.ndarray, n_mix: int, mode: str, rng: np.random.Generator) -> np.ndarray:
    """Append n_mix convex combinations of the base columns.

    Each mixture column is sum_k w_k * g_k with w drawn uniformly from the
    simplex and g_k the k-th base column (linear mode) or its sine
    (periodic mode).
    """
    if mode not in ("linear", "periodic"):
        raise ValueError(f"unknown mixture mode {mode!r}")
    g = np.sin(base) if mode == "periodic" else base
    n_base = base.shape[1]
    mixes = [g @ rng.dirichlet(np.ones(n_base)) for _ in range(n_mix)]
    if not mixes:
        return base.copy()
    return np.column_stack([base] + mixes)


def gen_mixture_dataset(T: int, n_base: int, n_mix: int, mode: str, seed: int) -> Dataset:
    """Synthetic benchmark: independent Gaussian bases plus convex mixtures.

    Base column k is drawn from N(2k, 1).  Labels are the binary split of
    base column 0 at its median, so supervised rankers can run on the same
    data.  base_truth marks columns 0 .. n_base-1.
    """
    if T < 2 or n_base < 2 or n_mix < 0:
        raise ValueError("need T >= 2, n_base >= 2, n_mix >= 0")
    rng = np.random.default_rng(seed)
    means = 2.0 * np.arange(n_base, dtype=np.float64)
    base = rng.normal(loc=means, scale=1.0, size=(T, n_base))
    values = mix_columns(base, n_mix, mode, rng)
    labels = (base[:, 0] > np.median(base[:, 0])).astype(np.int64)
    return Dataset(
        values=values,
        labels=labels,
        feature_names=tuple(f"f{i}" for i in range(values.shape[1])),
        base_truth=frozenset(range(n_base)),
    )


def load_iris() -> Dataset:
    """The embedded 150x4, 3-class Fisher iris table."""
    resource = importlib.resources.files("graphfs").joinpath("data/iris.csv")
    with importlib.resources.as_file(resource) as path:
        return load_csv(path, label_column="species")


def iris_mixture_dataset(n_mix: int, mode: str, seed: int) -> Dataset:
    """Iris columns as the base plus n_mix convex mixtures (see mix_columns).

    All columns are standardized (zero mean, unit sample variance) after
    mixing: the iris features have wildly different scales, and the
    mixture-recovery benchmark is about correlation structure, not raw
    dispersion.  Without this the dispersion term alone pins the widest
    base feature at the top in both modes and the linear/periodic contrast
    disappears.
    """
    iris = load_iris()
    rng = np.random.default_rng(seed)
    values = mix_columns(np.asarray(iris.values), n_mix, mode, rng)
    sig = values.std(axis=0, ddof=1)
    values = (values - values.mean(axis=0)) / np.where(sig > 0, sig, 1.0)
    names = iris.feature_names + tuple(f"mix{i}" for i in range(n_mix))
    return Dataset(
        values=values,
        labels=iris.labels,
        feature_names=names,
        base_truth=frozenset(range(iris.n_features)),
    )
