"""Batch command-line front end.

Commands: rank, eval, stability, synth, demo-iris.  Every command takes a
--seed and is bitwise-reproducible; all files land inside --output.  Exit
codes: 0 success, 1 data/numeric failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataset as ds
from . import evaluate as ev
from .ranking import ConvergenceError, DEFAULT_ALPHA, DEFAULT_BINS, rank_with_method

CLI_METHODS = {
    "infs-unsup": "infs_unsup",
    "infs-sup": "infs_sup",
    "ecfs": "ecfs",
    "fisher": "fisher",
    "mi": "mi",
}
SUPERVISED = {"infs_sup", "ecfs", "fisher", "mi"}


class ConfigError(Exception):
    """Invalid flag combination or out-of-range parameter (exit 2)."""


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_csv_rows(path: Path, rows: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("\n".join(",".join(row) for row in rows) + "\n")


def _out_dir(args) -> Path:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_input(args, method: str | None = None) -> ds.Dataset:
    if args.input is None:
        raise ConfigError("--input is required")
    if method in SUPERVISED and args.label_col is None:
        raise ConfigError(f"--method {args.method} requires --label-col")
    label = args.label_col
    if label is not None and label.lstrip("-").isdigit():
        label = int(label)
    return ds.load_csv(args.input, label_column=label)


def _method_params(args) -> dict:
    params: dict = {}
    if getattr(args, "alpha", None) is not None:
        if not 0.0 <= args.alpha <= 1.0:
            raise ConfigError(f"--alpha must be in [0, 1], got {args.alpha}")
        params["alpha"] = args.alpha
    if getattr(args, "bins", None) is not None:
        if args.bins < 2:
            raise ConfigError(f"--bins must be >= 2, got {args.bins}")
        params["bins"] = args.bins
    return params


def cmd_rank(args) -> int:
    method = CLI_METHODS[args.method]
    data = _load_input(args, method)
    params = _method_params(args)
    ranking = rank_with_method(data, method, params)
    out = _out_dir(args)
    payload = {"schema": "1", **ranking.to_dict()}
    _write_json(out / "ranking.json", payload)
    for idx in ranking.top(args.top):
        print(f"{data.feature_names[idx]}\t{ranking.scores[idx]!r}")
    return 0


def cmd_eval(args) -> int:
    method = CLI_METHODS[args.method]
    data = _load_input(args, method if method in SUPERVISED else None)
    if data.labels is None:
        raise ConfigError("eval requires --label-col")
    cards = _parse_cardinalities(args.cardinalities)
    if max(cards) > data.n_features:
        raise ConfigError(f"cardinality {max(cards)} exceeds {data.n_features} features")
    report = ev.eval_pipeline(
        data, method, _method_params(args), cardinalities=cards, trials=args.trials, seed=args.seed
    )
    out = _out_dir(args)
    _write_json(out / "eval_report.json", report.to_dict())
    _write_csv_rows(out / "auc_table.csv", report.to_csv_rows())
    return 0


def cmd_stability(args) -> int:
    method = CLI_METHODS[args.method]
    data = _load_input(args, method if method in SUPERVISED else None)
    if data.labels is None:
        raise ConfigError("stability requires --label-col")
    if not 0 < args.k < data.n_features:
        raise ConfigError(f"--k must be in (0, {data.n_features})")
    if args.trials < 2:
        raise ConfigError("--trials must be >= 2 for stability")
    report = ev.stability_experiment(
        data, method, _method_params(args), k=args.k, trials=args.trials, seed=args.seed
    )
    out = _out_dir(args)
    _write_json(out / "stability_report.json", report.to_dict())
    return 0


def cmd_synth(args) -> int:
    data = ds.gen_mixture_dataset(args.samples, args.n_base, args.n_mix, args.mode, args.seed)
    out = _out_dir(args)
    ds.save_csv(data, out / "dataset.csv")
    ds.save_manifest(out / "manifest.json", args.mode, args.seed, data)
    return 0


def cmd_demo_iris(args) -> int:
    params = {"alpha": args.alpha if args.alpha is not None else DEFAULT_ALPHA}

    def factory(mode: str, seed: int) -> ds.Dataset:
        return ds.iris_mixture_dataset(n_mix=16, mode=mode, seed=seed)

    reports = {
        mode: ev.mixture_recovery(
            mode, "infs_unsup", params, trials=args.trials, seed=args.seed, dataset_factory=factory
        )
        for mode in ("linear", "periodic")
    }
    payload = {
        "schema": "1",
        "alpha": params["alpha"],
        "seed": args.seed,
        "trials": args.trials,
        "linear": reports["linear"].to_dict(),
        "periodic": reports["periodic"].to_dict(),
        "periodic_smaller": reports["periodic"].trials_base_better < reports["linear"].trials_base_better,
    }
    out = _out_dir(args)
    _write_json(out / "recovery_report.json", payload)
    print(
        "linear: base better in "
        f"{reports['linear'].trials_base_better}/{args.trials} trials; "
        f"periodic: {reports['periodic'].trials_base_better}/{args.trials}"
    )
    return 0


def _parse_cardinalities(text: str) -> list[int]:
    try:
        cards = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"--cardinalities must be comma-separated integers, got {text!r}") from None
    if not cards or min(cards) < 1:
        raise ConfigError("--cardinalities must contain positive integers")
    return cards


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphfs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, method=True):
        if method:
            p.add_argument("--method", choices=sorted(CLI_METHODS), required=True)
            p.add_argument("--input", help="input CSV path")
            p.add_argument("--label-col", help="label column name or 0-based index")
            p.add_argument("--alpha", type=float, default=None, help=f"loading coefficient (default {DEFAULT_ALPHA})")
            p.add_argument("--bins", type=int, default=None, help=f"MI histogram bins (default {DEFAULT_BINS})")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", required=True, help="output directory")

    p_rank = sub.add_parser("rank", help="rank features of a CSV dataset")
    common(p_rank)
    p_rank.add_argument("--top", type=int, default=10, help="feature names printed to stdout")
    p_rank.set_defaults(func=cmd_rank)

    p_eval = sub.add_parser("eval", help="AUC versus selected-feature cardinality")
    common(p_eval)
    p_eval.add_argument("--cardinalities", default="10", help="comma-separated subset sizes")
    p_eval.add_argument("--trials", type=int, default=5)
    p_eval.set_defaults(func=cmd_eval)

    p_stab = sub.add_parser("stability", help="Kuncheva stability over resamples")
    common(p_stab)
    p_stab.add_argument("--k", type=int, default=10, help="subset size")
    p_stab.add_argument("--trials", type=int, default=10)
    p_stab.set_defaults(func=cmd_stability)

    p_synth = sub.add_parser("synth", help="generate a synthetic mixture dataset")
    p_synth.add_argument("--mode", choices=("linear", "periodic"), default="linear")
    p_synth.add_argument("--samples", type=int, default=150)
    p_synth.add_argument("--n-base", type=int, default=4)
    p_synth.add_argument("--n-mix", type=int, default=16)
    common(p_synth, method=False)
    p_synth.set_defaults(func=cmd_synth)

    p_demo = sub.add_parser("demo-iris", help="iris mixture-recovery experiment, linear and periodic")
    p_demo.add_argument("--trials", type=int, default=20)
    p_demo.add_argument("--alpha", type=float, default=None)
    common(p_demo, method=False)
    p_demo.set_defaults(func=cmd_demo_iris)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"graphfs {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ds.DataFormatError, ConvergenceError, ValueError, OSError, np.linalg.LinAlgError) as exc:
        print(f"graphfs {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
