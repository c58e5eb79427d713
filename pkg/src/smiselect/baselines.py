"""Comparison selection strategies: random, uncertainty trio, BADGE, regex, k-means.

Every selector returns exactly ``budget`` distinct ids. Seeded strategies
are bit-reproducible; score-based ones break ties toward the lowest id.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .errors import ConfigError, ContractViolation
from .features import Document

DATASET_TAGS = ("youtube", "sms", "tweet", "custom")


class ProbabilisticModel(Protocol):
    """A trained classifier usable by the model-dependent strategies."""

    def predict_proba(self, features: np.ndarray) -> np.ndarray: ...

    def gradient_embedding(self, features: np.ndarray) -> np.ndarray: ...


@dataclass
class QueryPhraseSet:
    """Exemplar phrases of the rare class; lowercased at load."""

    phrases: list[str]
    dataset_tag: str = "custom"

    def __post_init__(self):
        if not self.phrases:
            raise ConfigError("query phrase set is empty")
        if self.dataset_tag not in DATASET_TAGS:
            raise ConfigError(f"unknown dataset tag {self.dataset_tag!r}")
        self.phrases = [p.lower() for p in self.phrases]

    def __len__(self) -> int:
        return len(self.phrases)


def bundled_query_path(tag: str) -> Path:
    """Path of a shipped phrase fixture (youtube, sms, or tweet)."""
    if tag not in ("youtube", "sms", "tweet"):
        raise ConfigError(f"no bundled query fixture for tag {tag!r}")
    return Path(str(resources.files("smiselect") / "data" / "queries" / f"{tag}.txt"))


def load_query_phrases(path: str | Path, dataset_tag: str = "custom") -> QueryPhraseSet:
    """One phrase per line, UTF-8; blank lines are skipped."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    phrases = [ln.strip() for ln in lines if ln.strip()]
    return QueryPhraseSet(phrases=phrases, dataset_tag=dataset_tag)


# -- probability helpers ---------------------------------------------------


def _check_probs(probs: np.ndarray) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 2 or probs.shape[1] < 2:
        raise ContractViolation("probability input must be (n, >=2 classes)")
    if np.any(probs < 0):
        raise ContractViolation("negative class probability")
    if np.any(np.abs(probs.sum(axis=1) - 1.0) > 1e-6):
        raise ContractViolation("probability rows must sum to 1 within 1e-6")
    return probs


def _resolve_ids(n: int, ids: Sequence[int] | None) -> np.ndarray:
    if ids is None:
        return np.arange(n)
    if len(ids) != n:
        raise ContractViolation(f"got {len(ids)} ids for {n} rows")
    return np.asarray(ids)


def _top(scores: np.ndarray, ids: np.ndarray, budget: int, descending: bool) -> list[int]:
    if budget > len(ids):
        raise ConfigError(f"budget {budget} exceeds pool size {len(ids)}")
    key = -scores if descending else scores
    order = np.lexsort((ids, key))
    return [int(i) for i in ids[order[:budget]]]


# -- selectors --------------------------------------------------------------


def random_select(ids: Sequence[int], budget: int, seed: int) -> list[int]:
    ids = sorted(ids)
    if budget > len(ids):
        raise ConfigError(f"budget {budget} exceeds pool size {len(ids)}")
    rng = np.random.default_rng(seed)
    return [int(i) for i in rng.choice(ids, size=budget, replace=False)]


def entropy_select(probs: np.ndarray, budget: int, ids: Sequence[int] | None = None) -> list[int]:
    """Top-budget rows by Shannon entropy, 0 log 0 taken as 0."""
    probs = _check_probs(probs)
    h = -np.sum(np.where(probs > 0, probs * np.log(np.where(probs > 0, probs, 1.0)), 0.0), axis=1)
    return _top(h, _resolve_ids(len(probs), ids), budget, descending=True)


def least_confidence_select(
    probs: np.ndarray, budget: int, ids: Sequence[int] | None = None
) -> list[int]:
    """Lowest top-class probability first."""
    probs = _check_probs(probs)
    return _top(probs.max(axis=1), _resolve_ids(len(probs), ids), budget, descending=False)


def margin_select(probs: np.ndarray, budget: int, ids: Sequence[int] | None = None) -> list[int]:
    """Smallest (top-1 minus top-2 probability) first."""
    probs = _check_probs(probs)
    two = np.partition(probs, probs.shape[1] - 2, axis=1)[:, -2:]
    margin = two[:, 1] - two[:, 0]
    return _top(margin, _resolve_ids(len(probs), ids), budget, descending=False)


def kmeanspp(points: np.ndarray, k: int, seed: int) -> list[int]:
    """k-means++ D^2 seeding; returns k distinct row indices."""
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if k < 1 or k > n:
        raise ConfigError(f"cannot pick {k} centers from {n} points")
    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(n))]
    d2 = np.sum((points - points[chosen[0]]) ** 2, axis=1)
    while len(chosen) < k:
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            # every remaining point duplicates a chosen center
            nxt = min(i for i in range(n) if i not in chosen)
        chosen.append(nxt)
        d2 = np.minimum(d2, np.sum((points - points[nxt]) ** 2, axis=1))
    return chosen


def badge_select(
    model: ProbabilisticModel,
    features: np.ndarray,
    budget: int,
    seed: int,
    ids: Sequence[int] | None = None,
) -> list[int]:
    """k-means++ sampling over hypothesized last-layer loss gradients."""
    features = np.asarray(features, dtype=np.float64)
    id_arr = _resolve_ids(len(features), ids)
    if budget > len(id_arr):
        raise ConfigError(f"budget {budget} exceeds pool size {len(id_arr)}")
    grads = model.gradient_embedding(features)
    picks = kmeanspp(grads, budget, seed)
    return [int(id_arr[i]) for i in picks]


def regex_select(queries: QueryPhraseSet, corpus: Sequence[Document], budget: int) -> list[int]:
    """Highest cumulative phrase-match counts.

    Matches are case-insensitive, whole-phrase, word-boundary delimited, and
    counted without overlap.
    """
    if budget > len(corpus):
        raise ConfigError(f"budget {budget} exceeds pool size {len(corpus)}")
    patterns = [re.compile(r"\b" + re.escape(p) + r"\b", re.IGNORECASE) for p in queries.phrases]
    scores = np.array(
        [float(sum(len(pat.findall(doc.text)) for pat in patterns)) for doc in corpus]
    )
    ids = np.array([doc.id for doc in corpus])
    return _top(scores, ids, budget, descending=True)


def kmeans_select(
    features: np.ndarray,
    budget: int,
    seed: int,
    max_iters: int = 100,
    ids: Sequence[int] | None = None,
) -> list[int]:
    """Lloyd's k-means with k = budget; returns the 1-NN instance per center.

    Empty clusters are re-seeded to the point farthest from its assigned
    center; duplicate nearest-neighbor collisions fall back to the next
    nearest unused instance so the result always has ``budget`` distinct ids.
    """
    points = np.asarray(features, dtype=np.float64)
    n = points.shape[0]
    id_arr = _resolve_ids(n, ids)
    if budget > n:
        raise ConfigError(f"budget {budget} exceeds pool size {n}")
    centers = points[kmeanspp(points, budget, seed)].copy()
    assign = np.full(n, -1)
    for _ in range(max_iters):
        d2 = _sq_dists(points, centers)
        new_assign = np.argmin(d2, axis=1)
        for c in range(budget):
            mask = new_assign == c
            if np.any(mask):
                centers[c] = points[mask].mean(axis=0)
            else:
                far = int(np.argmax(d2[np.arange(n), new_assign]))
                new_assign[far] = c
                centers[c] = points[far]
                d2[far, :] = -np.inf  # keep it out of later empty-cluster repairs
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign

    d2 = _sq_dists(points, centers)
    used: set[int] = set()
    out: list[int] = []
    for c in range(budget):
        for i in np.lexsort((np.arange(n), d2[:, c])):
            if int(i) not in used:
                used.add(int(i))
                out.append(int(id_arr[i]))
                break
    return out


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return (
        np.sum(points * points, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers * centers, axis=1)[None, :]
    )
