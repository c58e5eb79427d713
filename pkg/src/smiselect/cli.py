"""Command-line interface: ``select``, ``experiment``, and ``ablate``.

Every flag can also live in a YAML/JSON config file (``--config``); flags
given on the command line win. Exit codes: 0 success, 2 configuration,
3 input format, 4 I/O, 5 contract violation, 6 numerical degeneracy,
1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import yaml

from .errors import ConfigError, ContractViolation, FormatError, NumericalDegeneracyError
from .harness import (
    STRATEGIES,
    ExperimentConfig,
    SplitSpec,
    load_inputs,
    report,
    run_ablation,
    run_experiment,
    run_selection,
)

_EXIT_CODES = [
    (ConfigError, 2, "config"),
    (FormatError, 3, "format"),
    (ContractViolation, 5, "contract"),
    (NumericalDegeneracyError, 6, "numerical"),
    (OSError, 4, "io"),
]

# (cli flag, config field, type)
_FLAGS = [
    ("--dataset", "dataset", str),
    ("--rare-label", "rare_label", str),
    ("--embeddings", "embeddings", str),
    ("--strategy", "strategy", str),
    ("--budget", "budget", int),
    ("--queries", "queries", str),
    ("--query-fraction", "query_fraction", float),
    ("--trials", "trials", int),
    ("--seed", "seed", int),
    ("--epochs", "epochs", int),
    ("--lr", "learning_rate", float),
    ("--batch-size", "batch_size", int),
    ("--l2", "l2", float),
    ("--imbalance", "imbalance", str),
    ("--split", "split", str),
    ("--test-fraction", "test_fraction", float),
    ("--measure", "measure", str),
    ("--rbf-gamma", "rbf_gamma", float),
    ("--optimizer", "optimizer", str),
    ("--lam", "lam", float),
    ("--epsilon", "epsilon", float),
    ("--bootstrap-size", "bootstrap_size", int),
    ("--output", "output", str),
    ("--format", "table_format", str),
]


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None, help="YAML/JSON config file")
    for flag, field, ftype in _FLAGS:
        extra = {}
        if field == "strategy":
            extra["choices"] = STRATEGIES
        parser.add_argument(flag, dest=field, type=ftype, default=None, **extra)


def _parse_split(value) -> SplitSpec:
    if isinstance(value, SplitSpec):
        return value
    if isinstance(value, dict):
        return SplitSpec(**value)
    parts = str(value).split(",")
    if len(parts) != 4:
        raise ConfigError(
            f"split must be 'rare_train,common_train,rare_test,common_test', got {value!r}"
        )
    try:
        nums = [int(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"non-integer split counts in {value!r}") from exc
    return SplitSpec(*nums)


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    merged: dict = {}
    if args.config:
        raw = yaml.safe_load(Path(args.config).read_text(encoding="utf-8"))
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise ConfigError(f"{args.config}: config file must be a key-value mapping")
        known = {field for _, field, _ in _FLAGS} | {"seeds"}
        for key, value in raw.items():
            key = key.replace("-", "_")
            if key not in known:
                raise ConfigError(f"{args.config}: unknown config key {key!r}")
            merged[key] = value
    for _, field, _ in _FLAGS:
        value = getattr(args, field, None)
        if value is not None:
            merged[field] = value
    if merged.get("split") is not None:
        merged["split"] = _parse_split(merged["split"])
    return ExperimentConfig(**merged)


def _cmd_select(args: argparse.Namespace) -> int:
    config = build_config(args)
    corpus, table, queries = load_inputs(config)
    selected, bootstrap, composition = run_selection(
        config, config.seed, corpus, table, queries
    )
    print(json.dumps(
        {
            "strategy": config.strategy,
            "seed": config.seed,
            "selected_ids": selected,
            "bootstrap_ids": bootstrap,
            "selection_composition": composition,
        },
        indent=2, sort_keys=True,
    ))
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    config = build_config(args)
    aggregate = run_experiment(config)
    out_dir = config.output or "results"
    paths = report([aggregate], config, out_dir, table_format=config.table_format)
    print(
        f"{config.strategy}: accuracy {aggregate.mean_accuracy:.4f} "
        f"± {aggregate.std_accuracy:.4f}, rare-class F1 {aggregate.mean_rare_f1:.4f} "
        f"± {aggregate.std_rare_f1:.4f}, rare selection rate "
        f"{aggregate.mean_rare_selection_rate:.4f} "
        f"({len(aggregate.trials)} trials)"
    )
    for name, path in paths.items():
        print(f"wrote {name}: {path}")
    return 0


def _cmd_ablate(args: argparse.Namespace) -> int:
    config = build_config(args)
    try:
        fractions = [float(p) for p in args.fractions.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --fractions value {args.fractions!r}") from exc
    if not fractions:
        raise ConfigError("--fractions is empty")
    aggregates = run_ablation(config, fractions)
    out_dir = config.output or "results"
    paths = report(aggregates, config, out_dir, table_format=config.table_format)
    for agg in aggregates:
        print(
            f"{config.strategy} @ fraction {agg.query_fraction:g}: "
            f"accuracy {agg.mean_accuracy:.4f} ± {agg.std_accuracy:.4f}, "
            f"rare-class F1 {agg.mean_rare_f1:.4f} ± {agg.std_rare_f1:.4f}"
        )
    for name, path in paths.items():
        print(f"wrote {name}: {path}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smiselect",
        description="Query-guided subset selection for cold-start active learning",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_select = sub.add_parser("select", help="run one selection round and print the ids")
    _add_common_flags(p_select)
    p_select.set_defaults(func=_cmd_select)

    p_exp = sub.add_parser("experiment", help="full multi-trial experiment")
    _add_common_flags(p_exp)
    p_exp.set_defaults(func=_cmd_experiment)

    p_abl = sub.add_parser("ablate", help="query-fraction sweep")
    _add_common_flags(p_abl)
    p_abl.add_argument("--fractions", type=str, default="0.2,0.4,0.6,0.8,1.0")
    p_abl.set_defaults(func=_cmd_ablate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        for klass, code, category in _EXIT_CODES:
            if isinstance(exc, klass):
                print(f"error ({category}): {exc}", file=sys.stderr)
                return code
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
