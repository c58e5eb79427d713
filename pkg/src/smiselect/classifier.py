"""Downstream evaluation model: multinomial softmax regression over
averaged embeddings, trained with seeded mini-batch SGD, plus the
confusion-matrix metrics the experiments report."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, ContractViolation

CHECKPOINT_VERSION = 1


@dataclass
class TrainConfig:
    learning_rate: float = 0.01
    epochs: int = 50
    batch_size: int = 32
    seed: int = 0
    l2: float = 0.0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ConfigError(f"learning rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be at least 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch size must be at least 1, got {self.batch_size}")
        if self.l2 < 0:
            raise ConfigError(f"l2 must be non-negative, got {self.l2}")


@dataclass
class MetricsReport:
    accuracy: float
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    rare_class_f1: float
    confusion: np.ndarray


@dataclass
class SoftmaxTextClassifier:
    """softmax(W x + b); also serves the BADGE/uncertainty baselines as a
    ProbabilisticModel (predict_proba + gradient_embedding)."""

    weights: np.ndarray
    bias: np.ndarray
    trained_epochs: int = 0
    loss_history: list[float] = field(default_factory=list)

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]

    @property
    def dimension(self) -> int:
        return self.weights.shape[1]

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] != self.dimension:
            raise ContractViolation(
                f"expected (n, {self.dimension}) features, got {features.shape}"
            )
        return _softmax(features @ self.weights.T + self.bias)

    def predict(self, features: np.ndarray) -> np.ndarray:
        return np.argmax(self.predict_proba(features), axis=1)

    def gradient_embedding(self, features: np.ndarray) -> np.ndarray:
        """Hypothesized last-layer loss gradient per instance.

        With pseudo-label yhat = argmax p, the cross-entropy gradient w.r.t.
        the last linear layer is (p - e_yhat) outer x, flattened to length
        n_classes * dimension.
        """
        features = np.asarray(features, dtype=np.float64)
        probs = self.predict_proba(features)
        pseudo = np.argmax(probs, axis=1)
        delta = probs.copy()
        delta[np.arange(len(features)), pseudo] -= 1.0
        return (delta[:, :, None] * features[:, None, :]).reshape(len(features), -1)


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_gradients(
    weights: np.ndarray,
    bias: np.ndarray,
    features: np.ndarray,
    labels: np.ndarray,
    l2: float = 0.0,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy (+ l2/2 ||W||^2) and its analytic gradients."""
    n = len(features)
    probs = _softmax(features @ weights.T + bias)
    picked = np.clip(probs[np.arange(n), labels], 1e-300, None)
    loss = float(-np.mean(np.log(picked))) + 0.5 * l2 * float(np.sum(weights * weights))
    delta = probs
    delta[np.arange(n), labels] -= 1.0
    grad_w = delta.T @ features / n + l2 * weights
    grad_b = delta.mean(axis=0)
    return loss, grad_w, grad_b


def train(
    features: np.ndarray,
    labels: np.ndarray,
    config: TrainConfig,
    n_classes: int | None = None,
) -> SoftmaxTextClassifier:
    """Seeded mini-batch SGD from zero weights; deterministic given the seed.

    ``loss_history`` records the full-set loss before training and after
    every epoch. Single-class training data is allowed with a warning (the
    model then predicts that class everywhere).
    """
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if len(features) == 0:
        raise ConfigError("empty training set")
    if len(features) != len(labels):
        raise ContractViolation(f"{len(features)} feature rows but {len(labels)} labels")
    if n_classes is None:
        n_classes = int(labels.max()) + 1
    if np.unique(labels).size < 2:
        warnings.warn("training data contains a single class; the model will be degenerate")

    n, d = features.shape
    weights = np.zeros((n_classes, d))
    bias = np.zeros(n_classes)
    rng = np.random.default_rng(config.seed)
    history = [loss_and_gradients(weights, bias, features, labels, config.l2)[0]]
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            _, grad_w, grad_b = loss_and_gradients(
                weights, bias, features[batch], labels[batch], config.l2
            )
            weights -= config.learning_rate * grad_w
            bias -= config.learning_rate * grad_b
        history.append(loss_and_gradients(weights, bias, features, labels, config.l2)[0])
    return SoftmaxTextClassifier(
        weights=weights, bias=bias, trained_epochs=config.epochs, loss_history=history
    )


def evaluate(
    model: SoftmaxTextClassifier,
    features: np.ndarray,
    labels: np.ndarray,
    rare_class: int,
) -> MetricsReport:
    """Confusion-matrix metrics on a test set; F1 uses the 0/0 := 0 convention."""
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) == 0:
        raise ContractViolation("empty test set")
    if not 0 <= rare_class < model.n_classes:
        raise ConfigError(f"rare class {rare_class} out of range 0..{model.n_classes - 1}")
    preds = model.predict(features)
    c = model.n_classes
    confusion = np.zeros((c, c), dtype=np.int64)
    np.add.at(confusion, (labels, preds), 1)
    diag = np.diag(confusion).astype(np.float64)
    col = confusion.sum(axis=0).astype(np.float64)
    row = confusion.sum(axis=1).astype(np.float64)
    precision = np.divide(diag, col, out=np.zeros(c), where=col > 0)
    recall = np.divide(diag, row, out=np.zeros(c), where=row > 0)
    pr = precision + recall
    f1 = np.divide(2.0 * precision * recall, pr, out=np.zeros(c), where=pr > 0)
    return MetricsReport(
        accuracy=float(diag.sum() / confusion.sum()),
        precision=precision,
        recall=recall,
        f1=f1,
        rare_class_f1=float(f1[rare_class]),
        confusion=confusion,
    )


def save_checkpoint(model: SoftmaxTextClassifier, path: str | Path) -> None:
    """Versioned JSON dump of (dimension, n_classes, weights, bias)."""
    payload = {
        "format_version": CHECKPOINT_VERSION,
        "dimension": model.dimension,
        "n_classes": model.n_classes,
        "weights": model.weights.tolist(),
        "bias": model.bias.tolist(),
        "trained_epochs": model.trained_epochs,
    }
    Path(path).write_text(json.dumps(payload, indent=2), encoding="utf-8")


def load_checkpoint(path: str | Path) -> SoftmaxTextClassifier:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format_version") != CHECKPOINT_VERSION:
        raise ConfigError(f"unsupported checkpoint version {payload.get('format_version')}")
    weights = np.array(payload["weights"], dtype=np.float64)
    bias = np.array(payload["bias"], dtype=np.float64)
    if weights.shape != (payload["n_classes"], payload["dimension"]) or bias.shape != (
        payload["n_classes"],
    ):
        raise ConfigError("checkpoint shape fields disagree with stored arrays")
    return SoftmaxTextClassifier(
        weights=weights, bias=bias, trained_epochs=int(payload.get("trained_epochs", 0))
    )
