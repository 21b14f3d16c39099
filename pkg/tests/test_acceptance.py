"""Acceptance suite: one test per shipping criterion, at pinned tolerances.

Each test registers a PASS/FAIL line that the conftest hook prints in the
terminal summary.  Oracles here are deliberately independent of the code
paths they check (brute-force counting, explicit power iteration, Monte
Carlo simulation, numeric integration).
"""

import math
import time

import numpy as np

import graphfs
from graphfs.cli import main as cli_main
from graphfs.dataset import Dataset, iris_mixture_dataset
from graphfs.evaluate import kuncheva, mixture_recovery, roc_auc
from graphfs.ranking import ec_scores, fundamental_matrix, infs_scores, spectral_radius, truncated_geometric
from graphfs.stats import spearman, two_sample_t_pvalue, ClassSplit

from conftest import record_acceptance


def test_criterion_1_geometric_series_equivalence():
    """Linear-solve scores equal the truncated geometric series."""
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 21))
        M = rng.uniform(0.0, 1.0, size=(n, n))
        A = 0.5 * (M + M.T)
        r = 0.9 / spectral_radius(A).value
        expect = truncated_geometric(A, r, L=300)
        got = infs_scores(A, r_factor=0.9)
        worst = max(worst, float(np.max(np.abs(got - expect) / np.abs(expect))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 1.0
    record_acceptance(
        "1 geometric-series equivalence (50 matrices, rel 1e-8, <1s)",
        ok,
        f"worst rel err {worst:.2e}, {elapsed:.2f}s",
    )
    assert worst <= 1e-8
    assert elapsed < 1.0


def test_criterion_2_eigenvector_centrality_limit():
    """Normalized A^200 e converges to the centrality scores."""
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 21))
        A = rng.uniform(0.05, 1.0, size=(n, n))  # strictly positive
        x = np.ones(n)
        for _ in range(200):
            x = A @ x
            x /= np.abs(x).sum()
        worst = max(worst, float(np.max(np.abs(x - ec_scores(A)))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 1.0
    record_acceptance(
        "2 eigenvector-centrality limit (50 matrices, inf-norm 1e-6, <1s)",
        ok,
        f"worst diff {worst:.2e}, {elapsed:.2f}s",
    )
    assert worst <= 1e-6
    assert elapsed < 1.0


def test_criterion_3_fundamental_matrix_monte_carlo():
    """(I - A)^-1 entries match simulated expected visit counts within 2%."""
    A = np.array(
        [
            [0.30, 0.20, 0.10, 0.10],
            [0.10, 0.20, 0.30, 0.20],
            [0.20, 0.10, 0.20, 0.30],
            [0.25, 0.25, 0.15, 0.10],
        ]
    )
    start = time.perf_counter()
    S = fundamental_matrix(A)
    rng = np.random.default_rng(303)
    cum = np.cumsum(A, axis=1)  # next-state thresholds; beyond the last = absorbed
    walks = 1_000_000
    estimate = np.zeros((4, 4))
    for origin in range(4):
        states = np.full(walks, origin, dtype=np.int8)
        alive = np.ones(walks, dtype=bool)
        visits = np.zeros((walks, 4), dtype=np.int32)
        visits[:, origin] = 1  # initial occupancy counts as a visit
        while alive.any():
            idx = np.flatnonzero(alive)
            u = rng.random(idx.size)
            nxt = (u[:, None] > cum[states[idx]]).sum(axis=1)
            absorbed = nxt == 4
            alive[idx[absorbed]] = False
            moved = idx[~absorbed]
            states[moved] = nxt[~absorbed].astype(np.int8)
            visits[moved, states[moved]] += 1
        estimate[origin] = visits.mean(axis=0)
    elapsed = time.perf_counter() - start
    worst = float(np.max(np.abs(estimate - S) / S))
    ok = worst <= 0.02 and elapsed < 30.0
    record_acceptance(
        "3 fundamental-matrix Monte Carlo (4x10^6 walks, 2% per entry, <30s)",
        ok,
        f"worst rel err {worst:.2%}, {elapsed:.1f}s",
    )
    assert worst <= 0.02
    assert elapsed < 30.0


def test_criterion_4_iris_mixture_recovery():
    """Iris base + 16 convex mixtures: bases stay on top in linear mode."""
    start = time.perf_counter()

    def factory(mode, seed):
        return iris_mixture_dataset(n_mix=16, mode=mode, seed=seed)

    params = {"alpha": 0.2}
    linear = mixture_recovery("linear", "infs_unsup", params, trials=20, seed=0, dataset_factory=factory)
    periodic = mixture_recovery("periodic", "infs_unsup", params, trials=20, seed=0, dataset_factory=factory)
    elapsed = time.perf_counter() - start

    linear_wins_ok = linear.trials_base_better >= 18
    medians_ok = all(r <= 10.0 for r in linear.per_base_median_rank)
    periodic_strictly_smaller = periodic.trials_base_better < linear.trials_base_better
    ok = linear_wins_ok and medians_ok and periodic_strictly_smaller and elapsed < 10.0
    record_acceptance(
        "4 iris mixture recovery (linear >=18/20, medians <=10, periodic strictly smaller, <10s)",
        ok,
        f"linear {linear.trials_base_better}/20 medians {linear.per_base_median_rank}, "
        f"periodic {periodic.trials_base_better}/20, {elapsed:.1f}s",
    )
    assert linear_wins_ok, f"linear wins {linear.trials_base_better}/20"
    assert medians_ok, f"linear medians {linear.per_base_median_rank}"
    assert elapsed < 10.0
    assert periodic_strictly_smaller, (
        f"periodic wins {periodic.trials_base_better}/20 vs linear {linear.trials_base_better}/20; "
        f"base mean rank linear {linear.base_mean_rank:.2f} vs periodic {periodic.base_mean_rank:.2f}"
    )


def test_criterion_5_throughput():
    """10k x 1k end-to-end: infs_unsup within 30 s, ecfs within 10 s."""
    rng = np.random.default_rng(505)
    values = rng.uniform(0.0, 1000.0, size=(10_000, 1_000))
    labels = rng.integers(0, 2, size=10_000)
    labels[:2] = [0, 1]
    unsup = Dataset(values=values)
    sup = Dataset(values=values, labels=labels)

    start = time.perf_counter()
    graphfs.rank_with_method(unsup, "infs_unsup", {"alpha": 0.2})
    t_infs = time.perf_counter() - start

    start = time.perf_counter()
    graphfs.rank_with_method(sup, "ecfs", {"alpha": 0.2, "bins": 16})
    t_ecfs = time.perf_counter() - start

    ok = t_infs <= 30.0 and t_ecfs <= 10.0
    record_acceptance(
        "5 throughput on 10000x1000 (infs_unsup <=30s, ecfs <=10s)",
        ok,
        f"infs_unsup {t_infs:.1f}s, ecfs {t_ecfs:.1f}s",
    )
    assert t_infs <= 30.0
    assert t_ecfs <= 10.0


def test_criterion_6_metric_exactness():
    """kuncheva and roc_auc agree with brute-force counting oracles."""
    rng = np.random.default_rng(606)
    worst_k = 0.0
    for _ in range(1000):
        n = int(rng.integers(3, 60))
        k = int(rng.integers(1, n))
        s1 = set(rng.choice(n, size=k, replace=False).tolist())
        s2 = set(rng.choice(n, size=k, replace=False).tolist())
        r = len(s1 & s2)
        expect = (r * n - k * k) / (k * (n - k))
        worst_k = max(worst_k, abs(kuncheva(s1, s2, n) - expect))

    worst_auc = 0.0
    for _ in range(500):
        m = int(rng.integers(4, 40))
        scores = rng.integers(0, 10, size=m).astype(float)  # ties likely
        labels = rng.integers(0, 2, size=m)
        labels[:2] = [0, 1]
        pos = scores[labels == 1]
        neg = scores[labels == 0]
        wins = sum(1 for p in pos for q in neg if p > q)
        ties = sum(1 for p in pos for q in neg if p == q)
        expect = (wins + 0.5 * ties) / (pos.size * neg.size)
        worst_auc = max(worst_auc, abs(roc_auc(scores, labels) - expect))

    ok = worst_k <= 1e-12 and worst_auc <= 1e-12
    record_acceptance(
        "6 metric exactness (kuncheva x1000, roc_auc x500, 1e-12)",
        ok,
        f"kuncheva err {worst_k:.1e}, auc err {worst_auc:.1e}",
    )
    assert worst_k <= 1e-12
    assert worst_auc <= 1e-12


def test_criterion_7_statistical_kernels():
    """spearman vs rank-then-Pearson oracle; t p-value vs integration oracle."""
    rng = np.random.default_rng(707)

    def oracle_ranks(x):
        out = np.empty(x.size)
        for i, v in enumerate(x):
            out[i] = np.sum(x < v) + (np.sum(x == v) + 1) / 2.0
        return out

    def oracle_pearson(x, y):
        xc, yc = x - x.mean(), y - y.mean()
        den = math.sqrt(float(np.sum(xc**2)) * float(np.sum(yc**2)))
        return float(np.sum(xc * yc)) / den if den else 0.0

    worst_sp = 0.0
    for i in range(200):
        m = int(rng.integers(3, 40))
        x = rng.integers(0, 6, size=m).astype(float) if i % 2 else rng.normal(size=m)
        y = rng.integers(0, 6, size=m).astype(float) if i % 3 else rng.normal(size=m)
        expect = oracle_pearson(oracle_ranks(x), oracle_ranks(y))
        worst_sp = max(worst_sp, abs(spearman(x, y) - expect))

    # |t| = 2.228 at df = 10: construct two 6-sample groups with that exact t
    pos = np.array([0.0, 1.0, -1.0, 0.5, -0.5, 0.0])
    neg = pos.copy()
    se = math.sqrt(np.var(pos, ddof=1) * (2.0 / 6.0))
    split = ClassSplit(pos + 2.228 * se, neg)
    p_got = two_sample_t_pvalue(split)

    df = 10
    c = math.gamma((df + 1) / 2.0) / (math.sqrt(df * math.pi) * math.gamma(df / 2.0))
    xs = np.linspace(2.228, 2.228 + 400.0, 200_001)
    ys = c * (1.0 + xs * xs / df) ** (-(df + 1) / 2.0)
    h = xs[1] - xs[0]
    p_oracle = 2.0 * (h / 3.0) * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-2:2].sum())

    ok = worst_sp <= 1e-12 and abs(p_got - 0.050) <= 1e-3 and abs(p_got - p_oracle) <= 1e-6
    record_acceptance(
        "7 statistical kernels (spearman x200 at 1e-12, t p-value 0.050 +- 1e-3)",
        ok,
        f"spearman err {worst_sp:.1e}, p {p_got:.6f} vs oracle {p_oracle:.6f}",
    )
    assert worst_sp <= 1e-12
    assert abs(p_got - p_oracle) <= 1e-6
    assert abs(p_got - 0.050) <= 1e-3


def test_criterion_8_cli_determinism(tmp_path):
    """Every CLI command is byte-identical over 3 reruns with one seed."""
    rng = np.random.default_rng(808)
    rows = ["a,b,c,y"]
    for i in range(24):
        rows.append(
            f"{(i % 2) * 2 + rng.normal(0, 0.3):.6f},{rng.normal(0, 1):.6f},{rng.normal(0, 1):.6f},{i % 2}"
        )
    csv_path = tmp_path / "input.csv"
    csv_path.write_text("\n".join(rows) + "\n", encoding="utf-8")

    commands = {
        "rank": ["rank", "--method", "infs-unsup", "--input", str(csv_path), "--seed", "7"],
        "eval": ["eval", "--method", "fisher", "--input", str(csv_path), "--label-col", "y",
                 "--cardinalities", "1,2", "--trials", "3", "--seed", "7"],
        "stability": ["stability", "--method", "mi", "--input", str(csv_path), "--label-col", "y",
                      "--k", "1", "--trials", "4", "--seed", "7"],
        "synth": ["synth", "--samples", "60", "--seed", "7"],
        "demo-iris": ["demo-iris", "--trials", "2", "--seed", "7"],
    }
    all_ok = True
    details = []
    for name, args in commands.items():
        digests = []
        for attempt in range(3):
            out = tmp_path / f"{name}_{attempt}"
            code = cli_main(args + ["--output", str(out)])
            assert code == 0, f"{name} exited {code}"
            blob = b"".join(path.read_bytes() for path in sorted(out.iterdir()))
            digests.append(blob)
        same = digests[0] == digests[1] == digests[2]
        all_ok = all_ok and same
        details.append(f"{name}:{'ok' if same else 'DIFFERS'}")
    record_acceptance("8 CLI determinism (5 commands x3 runs, byte-identical)", all_ok, " ".join(details))
    assert all_ok
