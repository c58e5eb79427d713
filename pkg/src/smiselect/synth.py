"""Synthetic blob corpora for calibration and acceptance experiments.

Each document is a single unique token whose embedding is a Gaussian draw
around its class center, so averaged-embedding featurization reproduces
the blob geometry exactly while still exercising the real text pipeline.
The rare class can be split across several angularly separated sub-blobs;
query exemplars cycle over the sub-blob centers.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .baselines import QueryPhraseSet
from .features import Document, EmbeddingTable
from .harness import Corpus


def make_blob_setting(
    seed: int,
    n_rare: int = 44,
    n_common: int = 440,
    dim: int = 8,
    rare_blobs: int = 1,
    n_queries: int = 5,
    noise: float = 0.15,
    scale: float = 1.0,
) -> tuple[Corpus, EmbeddingTable, QueryPhraseSet]:
    """Two classes in embedding space: one common blob, ``rare_blobs``
    rare sub-blobs on orthogonal directions. Returns (corpus, embedding
    table, query phrases of ``n_queries`` rare exemplar tokens)."""
    if rare_blobs + 1 > dim:
        raise ValueError(f"need dim >= {rare_blobs + 1} for orthogonal blob centers")
    rng = np.random.default_rng(seed)
    basis, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    common_center = scale * basis[:, 0]
    rare_centers = [scale * basis[:, 1 + k] for k in range(rare_blobs)]

    entries: dict[str, np.ndarray] = {}
    documents: list[Document] = []

    def add_doc(token: str, center: np.ndarray, label: int) -> None:
        entries[token] = center + noise * rng.normal(size=dim)
        documents.append(Document(id=len(documents), text=token, label=label))

    for i in range(n_common):
        add_doc(f"c{i:05d}", common_center, 0)
    for i in range(n_rare):
        add_doc(f"r{i:05d}", rare_centers[i % rare_blobs], 1)

    phrases = []
    for i in range(n_queries):
        token = f"q{i:03d}"
        entries[token] = rare_centers[i % rare_blobs] + noise * rng.normal(size=dim)
        phrases.append(token)

    corpus = Corpus(documents=documents, class_names=["common", "rare"], rare_class=1)
    table = EmbeddingTable(dimension=dim, entries=entries)
    return corpus, table, QueryPhraseSet(phrases=phrases, dataset_tag="custom")


def write_blob_files(
    directory: str | Path,
    corpus: Corpus,
    table: EmbeddingTable,
    queries: QueryPhraseSet,
) -> dict[str, Path]:
    """Materialize a blob setting as the on-disk formats the CLI consumes."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    dataset = directory / "dataset.csv"
    lines = ["text,label"]
    for doc in corpus.documents:
        lines.append(f"{doc.text},{corpus.class_names[doc.label]}")
    dataset.write_text("\n".join(lines) + "\n", encoding="utf-8")

    embeddings = directory / "embeddings.txt"
    rows = []
    for token, vec in table.entries.items():
        rows.append(token + " " + " ".join(f"{x:.17g}" for x in vec))
    embeddings.write_text("\n".join(rows) + "\n", encoding="utf-8")

    query_file = directory / "queries.txt"
    query_file.write_text("\n".join(queries.phrases) + "\n", encoding="utf-8")

    return {"dataset": dataset, "embeddings": embeddings, "queries": query_file}
