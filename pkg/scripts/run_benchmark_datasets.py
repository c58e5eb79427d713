#!/usr/bin/env python3
"""Benchmark comparisons on locally supplied public datasets.

The harness consumes plain ``text,label`` CSVs plus a pretrained word
vector file; neither is bundled (dataset licenses), so supply them:

  YouTube spam comments:  https://archive.ics.uci.edu/dataset/380/youtube+spam+collection
                          (concatenate the five per-video CSVs; map CLASS 1 -> spam,
                          0 -> ham; keep CONTENT as the text column)
  SMS spam collection:    https://archive.ics.uci.edu/dataset/228/sms+spam+collection
  Twitter sentiment:      airline-tweet sentiment corpus, positive/negative rows only
  GloVe vectors:          https://nlp.stanford.edu/projects/glove/ (e.g. glove.6B.50d.txt)

Per dataset tag this applies the benchmark per-class split counts,
budget, and epoch count, runs the requested strategies for the requested
number of trials, and prints a comparison table.
"""

from __future__ import annotations

import argparse

from smiselect.harness import (
    STRATEGIES,
    ExperimentConfig,
    SplitSpec,
    report,
    run_ablation,
    run_experiment,
)

SPLITS = {
    "youtube": SplitSpec(rare_train=85, common_train=808, rare_test=151, common_test=143),
    "sms": SplitSpec(rare_train=234, common_train=4312, rare_test=480, common_test=476),
    "tweet": SplitSpec(rare_train=1402, common_train=8178, rare_test=936, common_test=909),
}
RARE_LABELS = {"youtube": "spam", "sms": "spam", "tweet": "positive"}


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("--dataset-csv", required=True, help="text,label CSV file")
    parser.add_argument("--glove", required=True, help="pretrained vector file")
    parser.add_argument("--tag", required=True, choices=("youtube", "sms", "tweet"))
    parser.add_argument("--rare-label", default=None,
                        help="defaults per tag: spam/spam/positive")
    parser.add_argument("--strategies", type=str, default=",".join(STRATEGIES))
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--lr", type=float, default=0.01)
    parser.add_argument("--epochs", type=int, default=None,
                        help="defaults per tag: 50/30/25")
    parser.add_argument("--ablate", action="store_true",
                        help="also sweep query fractions 0.2..1.0 with logdetmi")
    parser.add_argument("--output", type=str, default=None)
    return parser.parse_args()


def main() -> None:
    args = parse_args()
    base = dict(
        dataset=args.dataset_csv,
        rare_label=args.rare_label or RARE_LABELS[args.tag],
        embeddings=args.glove,
        queries=args.tag,
        split=SPLITS[args.tag],
        trials=args.trials,
        seed=args.seed,
        learning_rate=args.lr,
        epochs=args.epochs,
    )
    aggregates = []
    last_config = None
    print(f"{'strategy':<10} {'accuracy':>16} {'rare F1':>16} {'rare rate':>10}")
    for strategy in (s.strip() for s in args.strategies.split(",") if s.strip()):
        config = ExperimentConfig(strategy=strategy, **base)
        agg = run_experiment(config)
        aggregates.append(agg)
        last_config = config
        print(
            f"{strategy:<10} {agg.mean_accuracy:8.4f} ± {agg.std_accuracy:5.4f} "
            f"{agg.mean_rare_f1:8.4f} ± {agg.std_rare_f1:5.4f} "
            f"{agg.mean_rare_selection_rate:10.4f}"
        )

    if args.ablate:
        config = ExperimentConfig(strategy="logdetmi", **base)
        cells = run_ablation(config, [0.2, 0.4, 0.6, 0.8, 1.0])
        aggregates.extend(cells)
        last_config = config
        print("\nquery-fraction ablation (logdetmi):")
        for cell in cells:
            print(
                f"  fraction {cell.query_fraction:>4.1f}: "
                f"accuracy {cell.mean_accuracy:.4f} ± {cell.std_accuracy:.4f}, "
                f"rare F1 {cell.mean_rare_f1:.4f} ± {cell.std_rare_f1:.4f}"
            )

    if args.output and aggregates:
        paths = report(aggregates, last_config, args.output)
        for name, path in paths.items():
            print(f"wrote {name}: {path}")


if __name__ == "__main__":
    main()
