#!/usr/bin/env python3
"""Per-cardinality AUC table for a user-supplied microarray CSV (e.g. Colon).

Not part of the test gate: absolute numbers depend on the classifier and
split protocol, so the table is for manual comparison only.

Usage:
    python scripts/microarray_auc_table.py --input colon.csv --label-col y \
        --methods infs_unsup,ecfs,fisher,mi --trials 20 --seed 0
"""

import argparse
import sys

from graphfs import eval_pipeline, load_csv


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--input", required=True, help="CSV with one label column")
    parser.add_argument("--label-col", required=True, help="label column name or 0-based index")
    parser.add_argument("--methods", default="infs_unsup,ecfs,fisher,mi")
    parser.add_argument("--cardinalities", default="10,50,100,150,200")
    parser.add_argument("--trials", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--alpha", type=float, default=0.2)
    args = parser.parse_args(argv)

    label = args.label_col
    if label.lstrip("-").isdigit():
        label = int(label)
    data = load_csv(args.input, label_column=label)
    cards = [int(tok) for tok in args.cardinalities.split(",") if tok.strip()]
    cards = [m for m in cards if m <= data.n_features]

    header = ["method"] + [str(m) for m in cards]
    print("\t".join(header))
    for method in args.methods.split(","):
        method = method.strip()
        report = eval_pipeline(
            data, method, {"alpha": args.alpha}, cardinalities=cards, trials=args.trials, seed=args.seed
        )
        cells = [f"{100 * mu:.1f}+-{100 * sd:.1f}" for mu, sd in zip(report.auc_mean, report.auc_std)]
        print("\t".join([method] + cells))
    return 0


if __name__ == "__main__":
    sys.exit(main())
