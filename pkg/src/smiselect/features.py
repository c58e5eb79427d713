"""Text featurization: embedding tables, tokenization, averaged document vectors."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, ContractViolation, FormatError


@dataclass(frozen=True)
class Document:
    """One text instance. ``id`` is stable for the whole run; selection
    results refer to it. ``label`` is a class index, or None for the
    unlabeled view handed to selectors."""

    id: int
    text: str
    label: int | None = None

    def __post_init__(self):
        if self.id < 0:
            raise ContractViolation(f"document id must be non-negative, got {self.id}")


@dataclass
class EmbeddingTable:
    """Token -> dense vector lookup, all vectors of length ``dimension``."""

    dimension: int
    entries: dict[str, np.ndarray] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def get(self, token: str) -> np.ndarray | None:
        return self.entries.get(token)


@dataclass
class FeatureMatrix:
    """Per-document averaged embedding vectors, row-aligned with ``ids``.

    Rows whose documents had no in-vocabulary token are exactly zero and
    flagged in ``oov_flags``.
    """

    ids: list[int]
    data: np.ndarray
    oov_flags: np.ndarray

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def dimension(self) -> int:
        return self.data.shape[1]


def tokenize(text: str) -> list[str]:
    """Lowercase, split on whitespace, strip affixed punctuation.

    Leading/trailing non-alphanumeric characters are removed per token;
    interior ones (hyphens, apostrophes) are kept. Empty results are dropped.
    """
    out = []
    for raw in text.lower().split():
        start, end = 0, len(raw)
        while start < end and not raw[start].isalnum():
            start += 1
        while end > start and not raw[end - 1].isalnum():
            end -= 1
        if end > start:
            out.append(raw[start:end])
    return out


def load_embeddings(path: str | Path, expected_dim: int | None = None) -> EmbeddingTable:
    """Parse a whitespace-separated ``token c1 ... cd`` vector file.

    Duplicate tokens keep their first vector (a warning is emitted); ragged
    lines are a :class:`FormatError`; an ``expected_dim`` mismatch is a
    :class:`ConfigError`.
    """
    path = Path(path)
    entries: dict[str, np.ndarray] = {}
    dimension: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split()
            if not parts:
                continue
            token, comps = parts[0], parts[1:]
            if not comps:
                raise FormatError(f"{path}:{lineno}: no vector components for token {token!r}")
            if dimension is None:
                dimension = len(comps)
            elif len(comps) != dimension:
                raise FormatError(
                    f"{path}:{lineno}: expected {dimension} components, got {len(comps)}"
                )
            try:
                vec = np.array([float(c) for c in comps], dtype=np.float64)
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: non-numeric component ({exc})") from exc
            if token in entries:
                warnings.warn(f"duplicate token {token!r} at {path}:{lineno}; keeping first")
                continue
            entries[token] = vec
    if dimension is None:
        raise FormatError(f"{path}: no embeddings")
    if expected_dim is not None and dimension != expected_dim:
        raise ConfigError(f"{path}: embedding dimension {dimension} != expected {expected_dim}")
    return EmbeddingTable(dimension=dimension, entries=entries)


def featurize(docs: Sequence[Document], table: EmbeddingTable) -> FeatureMatrix:
    """Mean of in-vocabulary token embeddings per document.

    An all-OOV (or empty) document becomes the zero vector with its
    ``oov_flag`` set; downstream similarity treats it as similar to nothing.
    """
    if len(table) == 0:
        raise ContractViolation("embedding table is empty")
    n, d = len(docs), table.dimension
    data = np.zeros((n, d), dtype=np.float64)
    flags = np.zeros(n, dtype=bool)
    for row, doc in enumerate(docs):
        vecs = [table.entries[t] for t in tokenize(doc.text) if t in table.entries]
        if vecs:
            data[row] = np.mean(vecs, axis=0)
        else:
            flags[row] = True
    return FeatureMatrix(ids=[d.id for d in docs], data=data, oov_flags=flags)
