"""graphfs: graph-based feature ranking with an evaluation harness.

Features are nodes of a weighted graph; rankings come either from the
energy of all paths of all lengths through a feature (a geometric series
of the adjacency matrix) or from eigenvector centrality.  Supervised and
unsupervised adjacency builders, baseline rankers, and stability /
AUC / mixture-recovery experiments are included, plus a batch CLI.
"""

from .dataset import (
    DataFormatError,
    Dataset,
    gen_mixture_dataset,
    iris_mixture_dataset,
    load_csv,
    load_iris,
    save_csv,
    split_stratified,
    sum_normalize,
)
from .graph import (
    AdjacencyMatrix,
    build_ecfs,
    build_infs_sup,
    build_infs_unsup,
    save_adjacency,
)
from .ranking import (
    ConvergenceError,
    Ranking,
    ec_scores,
    fundamental_matrix,
    infs_scores,
    rank_features,
    rank_with_method,
    spectral_radius,
    truncated_geometric,
)
from .evaluate import (
    EvalReport,
    LinearModel,
    RecoveryReport,
    StabilityReport,
    eval_pipeline,
    kuncheva,
    mixture_recovery,
    roc_auc,
    stability_experiment,
    train_linear,
)
from . import stats

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "ConvergenceError",
    "DataFormatError",
    "Dataset",
    "EvalReport",
    "LinearModel",
    "Ranking",
    "RecoveryReport",
    "StabilityReport",
    "build_ecfs",
    "build_infs_sup",
    "build_infs_unsup",
    "ec_scores",
    "eval_pipeline",
    "fundamental_matrix",
    "gen_mixture_dataset",
    "infs_scores",
    "iris_mixture_dataset",
    "kuncheva",
    "load_csv",
    "load_iris",
    "mixture_recovery",
    "rank_features",
    "rank_with_method",
    "roc_auc",
    "save_adjacency",
    "save_csv",
    "spectral_radius",
    "split_stratified",
    "stability_experiment",
    "stats",
    "sum_normalize",
    "train_linear",
    "truncated_geometric",
]
