"""End-to-end experiment orchestration.

A trial is: split -> featurize -> select B instances with one strategy ->
annotate them from gold labels -> train the downstream classifier ->
evaluate on the balanced test split. Experiments aggregate trials over
seeds; the ablation sweeps the query-fraction knob.

Selection strategies only ever see label-free document views; the
annotate step is the single place gold labels are revealed.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import baselines, classifier as clf
from .errors import ConfigError, ContractViolation, FormatError
from .features import Document, EmbeddingTable, FeatureMatrix, featurize, load_embeddings
from .kernels import build_kernels
from .optimizer import lazy_greedy, naive_greedy, stochastic_greedy
from .smi import VARIANTS, SmiObjective

STRATEGIES = VARIANTS + (
    "random",
    "entropy",
    "leastconf",
    "margin",
    "badge",
    "regex",
    "kmeans",
)

#: Benchmark defaults keyed by the bundled query fixture in use.
DEFAULT_BUDGETS = {"youtube": 50, "sms": 136, "tweet": 144}
DEFAULT_EPOCHS = {"youtube": 50, "sms": 30, "tweet": 25}


@dataclass
class Corpus:
    documents: list[Document]
    class_names: list[str]
    rare_class: int

    def __len__(self) -> int:
        return len(self.documents)

    def labels(self) -> np.ndarray:
        return np.array([d.label for d in self.documents], dtype=np.int64)

    def unlabeled_view(self) -> list[Document]:
        """Label-free copies handed to selection strategies."""
        return [Document(d.id, d.text, None) for d in self.documents]

    def label_of(self, doc_id: int) -> int:
        return self._by_id()[doc_id]

    def _by_id(self) -> dict[int, int]:
        if not hasattr(self, "_label_map"):
            self._label_map = {d.id: d.label for d in self.documents}
        return self._label_map


@dataclass(frozen=True)
class SplitSpec:
    """Exact per-class train/test counts (the class counts of the headline
    experiments: YouTube 85/808/151/143, SMS 234/4312/480/476,
    Tweet 1402/8178/936/909)."""

    rare_train: int
    common_train: int
    rare_test: int
    common_test: int

    def __post_init__(self):
        for name, value in dataclasses.asdict(self).items():
            if value < 0:
                raise ConfigError(f"{name} must be non-negative, got {value}")


@dataclass
class TrialResult:
    seed: int
    strategy: str
    selected_ids: list[int]
    bootstrap_ids: list[int]
    selection_composition: dict[str, int]
    accuracy: float
    rare_class_f1: float
    metrics: clf.MetricsReport
    query_phrases: list[str] | None
    timings: dict[str, float]


@dataclass
class ExperimentAggregate:
    strategy: str
    dataset: str | None
    query_fraction: float
    budget: int
    seeds: list[int]
    trials: list[TrialResult]
    mean_accuracy: float
    std_accuracy: float
    mean_rare_f1: float
    std_rare_f1: float
    mean_rare_selection_rate: float


@dataclass
class ExperimentConfig:
    dataset: str | None = None
    rare_label: str | None = None
    embeddings: str | None = None
    strategy: str = "logdetmi"
    budget: int | None = None
    queries: str | None = None
    query_fraction: float = 1.0
    trials: int = 1
    seed: int = 0
    seeds: list[int] | None = None
    epochs: int | None = None
    learning_rate: float = 0.01
    batch_size: int = 32
    l2: float = 0.0
    imbalance: str | None = None
    split: SplitSpec | None = None
    test_fraction: float = 0.2
    measure: str = "cosine-rescaled"
    rbf_gamma: float = 1.0
    optimizer: str = "lazy"
    lam: float = 1.0
    epsilon: float | None = None
    bootstrap_size: int = 10
    output: str | None = None
    table_format: str = "csv"

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if self.budget is not None and self.budget < 1:
            raise ConfigError(f"budget must be at least 1, got {self.budget}")
        if not 0.0 < self.query_fraction <= 1.0:
            raise ConfigError(f"query fraction must lie in (0, 1], got {self.query_fraction}")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}")
        if self.optimizer not in ("lazy", "naive", "stochastic"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if self.table_format not in ("csv", "json"):
            raise ConfigError(f"unknown table format {self.table_format!r}")

    @property
    def dataset_tag(self) -> str:
        return self.queries if self.queries in ("youtube", "sms", "tweet") else "custom"

    def resolved_budget(self) -> int:
        if self.budget is not None:
            return self.budget
        tag = self.dataset_tag
        if tag in DEFAULT_BUDGETS:
            return DEFAULT_BUDGETS[tag]
        raise ConfigError("budget is required unless a bundled query tag implies one")

    def resolved_epochs(self) -> int:
        if self.epochs is not None:
            return self.epochs
        return DEFAULT_EPOCHS.get(self.dataset_tag, 50)

    def trial_seeds(self) -> list[int]:
        if self.seeds is not None:
            if len(self.seeds) < 1:
                raise ConfigError("explicit seed list is empty")
            return list(self.seeds)
        return [self.seed + i for i in range(self.trials)]


def parse_imbalance(text: str) -> tuple[float, float]:
    """'1:10' -> (1.0, 10.0), rare first."""
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigError(f"imbalance must look like 'rare:common', got {text!r}")
    try:
        rare, common = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"non-numeric imbalance ratio {text!r}") from exc
    if rare <= 0 or common <= 0:
        raise ConfigError(f"imbalance parts must be positive, got {text!r}")
    return rare, common


# -- ingestion & splits ------------------------------------------------------


def ingest_dataset(path: str | Path, rare_label: str) -> Corpus:
    """Read a text,label CSV; classes are indexed in first-seen order."""
    path = Path(path)
    documents: list[Document] = []
    class_names: list[str] = []
    index: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        cols = reader.fieldnames or []
        if "text" not in cols or "label" not in cols:
            raise ConfigError(f"{path}: need 'text' and 'label' columns, found {cols}")
        for i, row in enumerate(reader):
            text, label = row.get("text"), row.get("label")
            if text is None or label is None:
                raise FormatError(f"{path}: row {i + 2} is missing a text or label field")
            if label not in index:
                index[label] = len(class_names)
                class_names.append(label)
            documents.append(Document(id=i, text=text, label=index[label]))
    if not documents:
        raise ConfigError(f"{path}: dataset is empty")
    if rare_label not in index:
        raise ConfigError(f"rare label {rare_label!r} absent from {path} (classes: {class_names})")
    return Corpus(documents=documents, class_names=class_names, rare_class=index[rare_label])


def make_splits(
    corpus: Corpus,
    spec: SplitSpec | None = None,
    ratio: tuple[float, float] | None = None,
    seed: int = 0,
    test_fraction: float = 0.2,
) -> tuple[Corpus, Corpus]:
    """Seeded (train, balanced test) split.

    With a SplitSpec the per-class counts are hit exactly. With a ratio the
    balanced test set is carved first (test_fraction of the scarcer class
    per side) and the train remainder is downsampled toward rare:common =
    ratio; ratio None keeps the natural train imbalance.
    """
    rng = np.random.default_rng(seed)
    rare = sorted(d.id for d in corpus.documents if d.label == corpus.rare_class)
    common = sorted(d.id for d in corpus.documents if d.label != corpus.rare_class)
    rare_perm = [rare[i] for i in rng.permutation(len(rare))]
    common_perm = [common[i] for i in rng.permutation(len(common))]

    if spec is not None:
        _require(len(rare), spec.rare_test + spec.rare_train, "rare", corpus)
        _require(len(common), spec.common_test + spec.common_train, "common", corpus)
        rare_test = rare_perm[: spec.rare_test]
        rare_train = rare_perm[spec.rare_test : spec.rare_test + spec.rare_train]
        common_test = common_perm[: spec.common_test]
        common_train = common_perm[spec.common_test : spec.common_test + spec.common_train]
    else:
        t = int(math.floor(test_fraction * min(len(rare), len(common))))
        rare_test, common_test = rare_perm[:t], common_perm[:t]
        rare_pool, common_pool = rare_perm[t:], common_perm[t:]
        if ratio is None:
            rare_train, common_train = rare_pool, common_pool
        else:
            r, c = ratio
            want_common = int(math.floor(len(rare_pool) * c / r))
            want_rare = int(math.floor(len(common_pool) * r / c))
            if len(common_pool) > want_common:
                rare_train, common_train = rare_pool, common_pool[:want_common]
            elif len(rare_pool) > want_rare:
                rare_train, common_train = rare_pool[:want_rare], common_pool
            else:
                rare_train, common_train = rare_pool, common_pool
    train_ids = set(rare_train) | set(common_train)
    test_ids = set(rare_test) | set(common_test)
    train_docs = [d for d in corpus.documents if d.id in train_ids]
    test_docs = [d for d in corpus.documents if d.id in test_ids]
    if not train_docs:
        raise ConfigError("degenerate split: no training documents left")
    return (
        Corpus(train_docs, corpus.class_names, corpus.rare_class),
        Corpus(test_docs, corpus.class_names, corpus.rare_class),
    )


def _require(have: int, need: int, side: str, corpus: Corpus) -> None:
    if have < need:
        name = corpus.class_names[corpus.rare_class] if side == "rare" else side
        raise ConfigError(f"split needs {need} {name!r} instances, corpus has {have} "
                          f"(short {need - have})")


# -- per-trial machinery -----------------------------------------------------


@dataclass
class _TrialContext:
    train: Corpus
    test: Corpus
    train_features: FeatureMatrix
    query_features: FeatureMatrix
    query_subset: baselines.QueryPhraseSet | None
    select_seed: int
    bootstrap_seed: int
    train_seed: int
    timings: dict[str, float] = field(default_factory=dict)


def _child_seeds(seed: int, n: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def _subsample_queries(
    queries: baselines.QueryPhraseSet, fraction: float, seed: int
) -> baselines.QueryPhraseSet:
    if not 0.0 < fraction <= 1.0:
        raise ConfigError(f"query fraction must lie in (0, 1], got {fraction}")
    k = math.ceil(fraction * len(queries.phrases))
    rng = np.random.default_rng(seed)
    picks = np.sort(rng.choice(len(queries.phrases), size=k, replace=False))
    return baselines.QueryPhraseSet(
        phrases=[queries.phrases[i] for i in picks], dataset_tag=queries.dataset_tag
    )


def _prepare_trial(
    config: ExperimentConfig,
    seed: int,
    corpus: Corpus,
    table: EmbeddingTable,
    queries: baselines.QueryPhraseSet | None,
) -> _TrialContext:
    split_seed, bootstrap_seed, select_seed, train_seed, query_seed = _child_seeds(seed, 5)
    ratio = parse_imbalance(config.imbalance) if config.imbalance else None
    train, test = make_splits(
        corpus, spec=config.split, ratio=ratio, seed=split_seed,
        test_fraction=config.test_fraction,
    )
    subset = None
    if queries is not None:
        subset = _subsample_queries(queries, config.query_fraction, query_seed)
    t0 = time.perf_counter()
    train_features = featurize(train.unlabeled_view(), table)
    if subset is not None:
        query_docs = [Document(i, p) for i, p in enumerate(subset.phrases)]
        query_features = featurize(query_docs, table)
    else:
        query_features = FeatureMatrix(ids=[], data=np.zeros((0, table.dimension)),
                                       oov_flags=np.zeros(0, dtype=bool))
    ctx = _TrialContext(
        train=train, test=test, train_features=train_features,
        query_features=query_features, query_subset=subset,
        select_seed=select_seed, bootstrap_seed=bootstrap_seed, train_seed=train_seed,
    )
    ctx.timings["featurize"] = time.perf_counter() - t0
    return ctx


def _needs_queries(strategy: str) -> bool:
    return strategy in VARIANTS or strategy == "regex"


def _greedy(config: ExperimentConfig, obj: SmiObjective, ground: list[int],
            budget: int, seed: int):
    if config.optimizer == "naive":
        return naive_greedy(obj, ground, budget)
    if config.optimizer == "stochastic":
        return stochastic_greedy(obj, ground, budget, seed=seed)
    return lazy_greedy(obj, ground, budget)


def _select(config: ExperimentConfig, ctx: _TrialContext) -> tuple[list[int], list[int]]:
    """Run the configured strategy; returns (selected ids, bootstrap ids)."""
    budget = config.resolved_budget()
    strategy = config.strategy
    if _needs_queries(strategy) and ctx.query_subset is None:
        raise ConfigError(f"strategy {strategy!r} needs a query phrase set")

    # The labeled micro-batch that model-dependent strategies bootstrap
    # from. It is drawn once per trial (same ids whatever the strategy),
    # removed from every selection pool, and never counted against B.
    all_ids = [d.id for d in ctx.train.documents]
    boot_size = min(config.bootstrap_size, max(len(all_ids) - budget, 0))
    bootstrap_ids = sorted(
        baselines.random_select(all_ids, boot_size, ctx.bootstrap_seed)
    ) if boot_size else []
    boot_set = set(bootstrap_ids)
    pool_ids = [i for i in all_ids if i not in boot_set]
    if budget > len(pool_ids):
        raise ConfigError(f"budget {budget} exceeds selection pool {len(pool_ids)}")
    id_to_row = {doc_id: r for r, doc_id in enumerate(ctx.train_features.ids)}
    pool_rows = [id_to_row[i] for i in pool_ids]
    pool_features = ctx.train_features.data[pool_rows]

    t0 = time.perf_counter()
    if strategy in VARIANTS:
        pool_matrix = FeatureMatrix(
            ids=pool_ids, data=pool_features,
            oov_flags=ctx.train_features.oov_flags[pool_rows],
        )
        kernels = build_kernels(pool_matrix, ctx.query_features, measure=config.measure,
                                variant=strategy, gamma=config.rbf_gamma)
        obj = SmiObjective(strategy, kernels, lam=config.lam, epsilon=config.epsilon)
        selected = _greedy(config, obj, pool_ids, budget, ctx.select_seed).selected_ids
    elif strategy == "random":
        selected = baselines.random_select(pool_ids, budget, ctx.select_seed)
    elif strategy == "regex":
        pool_docs = [d for d in ctx.train.unlabeled_view() if d.id not in boot_set]
        selected = baselines.regex_select(ctx.query_subset, pool_docs, budget)
    elif strategy == "kmeans":
        selected = baselines.kmeans_select(pool_features, budget, ctx.select_seed, ids=pool_ids)
    elif strategy in ("entropy", "leastconf", "margin", "badge"):
        probe = _bootstrap_model(config, ctx, bootstrap_ids, id_to_row)
        if strategy == "badge":
            selected = baselines.badge_select(probe, pool_features, budget,
                                              ctx.select_seed, ids=pool_ids)
        else:
            probs = probe.predict_proba(pool_features)
            chooser = {
                "entropy": baselines.entropy_select,
                "leastconf": baselines.least_confidence_select,
                "margin": baselines.margin_select,
            }[strategy]
            selected = chooser(probs, budget, ids=pool_ids)
    else:  # unreachable: __post_init__ validates
        raise ConfigError(f"unknown strategy {strategy!r}")
    ctx.timings["select"] = time.perf_counter() - t0
    return selected, bootstrap_ids


def _bootstrap_model(
    config: ExperimentConfig,
    ctx: _TrialContext,
    bootstrap_ids: list[int],
    id_to_row: dict[int, int],
) -> clf.SoftmaxTextClassifier:
    if not bootstrap_ids:
        raise ConfigError("model-dependent strategy with bootstrap_size 0 cannot run cold")
    rows = [id_to_row[i] for i in bootstrap_ids]
    feats = ctx.train_features.data[rows]
    labels = np.array([ctx.train.label_of(i) for i in bootstrap_ids], dtype=np.int64)
    cfg = clf.TrainConfig(
        learning_rate=config.learning_rate, epochs=config.resolved_epochs(),
        batch_size=config.batch_size, seed=ctx.train_seed, l2=config.l2,
    )
    with warnings.catch_warnings():
        # single-class micro-batches are routine in cold start
        warnings.simplefilter("ignore")
        return clf.train(feats, labels, cfg, n_classes=len(ctx.train.class_names))


def run_selection(
    config: ExperimentConfig,
    seed: int,
    corpus: Corpus,
    table: EmbeddingTable,
    queries: baselines.QueryPhraseSet | None,
) -> tuple[list[int], list[int], dict[str, int]]:
    """One selection round only: (selected, bootstrap, per-class composition)."""
    ctx = _prepare_trial(config, seed, corpus, table, queries)
    selected, bootstrap_ids = _select(config, ctx)
    return selected, bootstrap_ids, _composition(ctx.train, selected)


def _composition(train: Corpus, selected: list[int]) -> dict[str, int]:
    counts = {name: 0 for name in train.class_names}
    for doc_id in selected:
        counts[train.class_names[train.label_of(doc_id)]] += 1
    return counts


def run_trial(
    config: ExperimentConfig,
    seed: int,
    corpus: Corpus,
    table: EmbeddingTable,
    queries: baselines.QueryPhraseSet | None,
) -> TrialResult:
    """Select, annotate, train, evaluate; everything derived from ``seed``."""
    ctx = _prepare_trial(config, seed, corpus, table, queries)
    selected, bootstrap_ids = _select(config, ctx)

    # annotate: the one place train labels are revealed
    train_ids = list(selected) + [i for i in bootstrap_ids if i not in set(selected)]
    labels = np.array([ctx.train.label_of(i) for i in train_ids], dtype=np.int64)
    id_to_row = {doc_id: r for r, doc_id in enumerate(ctx.train_features.ids)}
    feats = ctx.train_features.data[[id_to_row[i] for i in train_ids]]

    t0 = time.perf_counter()
    cfg = clf.TrainConfig(
        learning_rate=config.learning_rate, epochs=config.resolved_epochs(),
        batch_size=config.batch_size, seed=ctx.train_seed, l2=config.l2,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        model = clf.train(feats, labels, cfg, n_classes=len(ctx.train.class_names))
    ctx.timings["train"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    test_features = featurize(ctx.test.unlabeled_view(), table)
    metrics = clf.evaluate(model, test_features.data, ctx.test.labels(), ctx.train.rare_class)
    ctx.timings["evaluate"] = time.perf_counter() - t0

    return TrialResult(
        seed=seed,
        strategy=config.strategy,
        selected_ids=[int(i) for i in selected],
        bootstrap_ids=[int(i) for i in bootstrap_ids],
        selection_composition=_composition(ctx.train, selected),
        accuracy=metrics.accuracy,
        rare_class_f1=metrics.rare_class_f1,
        metrics=metrics,
        query_phrases=list(ctx.query_subset.phrases) if ctx.query_subset else None,
        timings=dict(ctx.timings),
    )


# -- experiment & ablation ---------------------------------------------------


def load_inputs(
    config: ExperimentConfig,
) -> tuple[Corpus, EmbeddingTable, baselines.QueryPhraseSet | None]:
    if config.dataset is None or config.rare_label is None:
        raise ConfigError("dataset path and rare label are required")
    if config.embeddings is None:
        raise ConfigError("embeddings path is required")
    corpus = ingest_dataset(config.dataset, config.rare_label)
    table = load_embeddings(config.embeddings)
    queries = None
    if config.queries is not None:
        tag = config.dataset_tag
        path = baselines.bundled_query_path(tag) if tag != "custom" else Path(config.queries)
        queries = baselines.load_query_phrases(path, dataset_tag=tag)
    return corpus, table, queries


def _mean_std(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    # constant series (and single trials) report exactly zero spread
    if len(arr) < 2 or np.all(arr == arr[0]):
        return (float(arr[0]) if len(arr) else mean, 0.0)
    return mean, float(arr.std(ddof=1))


def run_experiment(
    config: ExperimentConfig,
    corpus: Corpus | None = None,
    table: EmbeddingTable | None = None,
    queries: baselines.QueryPhraseSet | None = None,
) -> ExperimentAggregate:
    """All trials for one (dataset, strategy) cell, aggregated over seeds."""
    if corpus is None or table is None:
        corpus, table, queries = load_inputs(config)
    seeds = config.trial_seeds()
    trials = []
    for seed in seeds:
        try:
            trials.append(run_trial(config, seed, corpus, table, queries))
        except Exception as exc:
            raise type(exc)(f"trial with seed {seed} failed: {exc}") from exc
    mean_acc, std_acc = _mean_std([t.accuracy for t in trials])
    mean_f1, std_f1 = _mean_std([t.rare_class_f1 for t in trials])
    rare_name = corpus.class_names[corpus.rare_class]
    budget = config.resolved_budget()
    rate = float(np.mean([t.selection_composition[rare_name] / budget for t in trials]))
    return ExperimentAggregate(
        strategy=config.strategy,
        dataset=config.dataset,
        query_fraction=config.query_fraction,
        budget=budget,
        seeds=seeds,
        trials=trials,
        mean_accuracy=mean_acc,
        std_accuracy=std_acc,
        mean_rare_f1=mean_f1,
        std_rare_f1=std_f1,
        mean_rare_selection_rate=rate,
    )


def run_ablation(
    config: ExperimentConfig,
    fractions: list[float],
    corpus: Corpus | None = None,
    table: EmbeddingTable | None = None,
    queries: baselines.QueryPhraseSet | None = None,
) -> list[ExperimentAggregate]:
    """Re-run the experiment at each query-set fraction (seeded subsampling)."""
    for p in fractions:
        if not 0.0 < p <= 1.0:
            raise ConfigError(f"ablation fraction must lie in (0, 1], got {p}")
    if corpus is None or table is None:
        corpus, table, queries = load_inputs(config)
    out = []
    for p in fractions:
        cell = dataclasses.replace(config, query_fraction=p)
        out.append(run_experiment(cell, corpus=corpus, table=table, queries=queries))
    return out


# -- reporting ---------------------------------------------------------------


def _metrics_dict(m: clf.MetricsReport) -> dict:
    return {
        "accuracy": m.accuracy,
        "precision": m.precision.tolist(),
        "recall": m.recall.tolist(),
        "f1": m.f1.tolist(),
        "rare_class_f1": m.rare_class_f1,
        "confusion": m.confusion.tolist(),
    }


def _trial_dict(t: TrialResult) -> dict:
    # wall-clock timings are deliberately left out: provenance files must be
    # byte-identical across reruns of the same config
    return {
        "seed": t.seed,
        "strategy": t.strategy,
        "selected_ids": t.selected_ids,
        "bootstrap_ids": t.bootstrap_ids,
        "selection_composition": t.selection_composition,
        "accuracy": t.accuracy,
        "rare_class_f1": t.rare_class_f1,
        "metrics": _metrics_dict(t.metrics),
        "query_phrases": t.query_phrases,
    }


def _aggregate_dict(agg: ExperimentAggregate, config: ExperimentConfig) -> dict:
    cfg = dataclasses.asdict(config)
    cfg["query_fraction"] = agg.query_fraction
    # where the report lands must not change what it says
    cfg.pop("output", None)
    return {
        "config": cfg,
        "strategy": agg.strategy,
        "dataset": agg.dataset,
        "query_fraction": agg.query_fraction,
        "budget": agg.budget,
        "seeds": agg.seeds,
        "mean_accuracy": agg.mean_accuracy,
        "std_accuracy": agg.std_accuracy,
        "mean_rare_f1": agg.mean_rare_f1,
        "std_rare_f1": agg.std_rare_f1,
        "mean_rare_selection_rate": agg.mean_rare_selection_rate,
        "trials": [_trial_dict(t) for t in agg.trials],
    }


def report(
    aggregates: list[ExperimentAggregate],
    config: ExperimentConfig,
    output_dir: str | Path,
    table_format: str = "csv",
) -> dict[str, Path]:
    """Write the results table and the full provenance record.

    results.(csv|json) has one row per (dataset, strategy, fraction) cell;
    provenance.json is the complete, deterministic trial record.
    """
    if not aggregates:
        raise ConfigError("nothing to report: empty aggregate list")
    if table_format not in ("csv", "json"):
        raise ConfigError(f"unknown table format {table_format!r}")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [
        {
            "dataset": agg.dataset or "",
            "strategy": agg.strategy,
            "query_fraction": agg.query_fraction,
            "budget": agg.budget,
            "trials": len(agg.trials),
            "mean_accuracy": f"{agg.mean_accuracy:.4f}",
            "std_accuracy": f"{agg.std_accuracy:.4f}",
            "mean_rare_f1": f"{agg.mean_rare_f1:.4f}",
            "std_rare_f1": f"{agg.std_rare_f1:.4f}",
            "mean_rare_selection_rate": f"{agg.mean_rare_selection_rate:.4f}",
        }
        for agg in aggregates
    ]
    paths: dict[str, Path] = {}
    if table_format == "csv":
        table_path = out / "results.csv"
        with open(table_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
    else:
        table_path = out / "results.json"
        table_path.write_text(json.dumps(rows, indent=2, sort_keys=True), encoding="utf-8")
    paths["table"] = table_path

    provenance = {
        "format_version": 1,
        "cells": [_aggregate_dict(agg, config) for agg in aggregates],
    }
    prov_path = out / "provenance.json"
    prov_path.write_text(json.dumps(provenance, indent=2, sort_keys=True), encoding="utf-8")
    paths["provenance"] = prov_path
    return paths


def load_provenance(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
