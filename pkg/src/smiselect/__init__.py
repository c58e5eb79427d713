"""Query-guided subset selection for cold-start, class-imbalanced active learning."""

from .baselines import QueryPhraseSet, load_query_phrases
from .classifier import MetricsReport, SoftmaxTextClassifier, TrainConfig
from .errors import ConfigError, ContractViolation, FormatError, NumericalDegeneracyError
from .features import Document, EmbeddingTable, FeatureMatrix, featurize, load_embeddings, tokenize
from .harness import (
    Corpus,
    ExperimentConfig,
    SplitSpec,
    TrialResult,
    ingest_dataset,
    make_splits,
    run_ablation,
    run_experiment,
    run_trial,
)
from .kernels import KernelSet, SimilarityKernel, build_kernels, cosine_rescaled, rbf_similarity
from .optimizer import SelectionResult, lazy_greedy, naive_greedy, stochastic_greedy
from .smi import SelectionState, SmiObjective

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ContractViolation",
    "Corpus",
    "Document",
    "EmbeddingTable",
    "ExperimentConfig",
    "FeatureMatrix",
    "FormatError",
    "KernelSet",
    "MetricsReport",
    "NumericalDegeneracyError",
    "QueryPhraseSet",
    "SelectionResult",
    "SelectionState",
    "SimilarityKernel",
    "SmiObjective",
    "SoftmaxTextClassifier",
    "SplitSpec",
    "TrainConfig",
    "TrialResult",
    "build_kernels",
    "cosine_rescaled",
    "featurize",
    "ingest_dataset",
    "lazy_greedy",
    "load_embeddings",
    "load_query_phrases",
    "make_splits",
    "naive_greedy",
    "rbf_similarity",
    "run_ablation",
    "run_experiment",
    "run_trial",
    "stochastic_greedy",
    "tokenize",
]
