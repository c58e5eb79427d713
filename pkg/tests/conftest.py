import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from smiselect.features import Document, EmbeddingTable  # noqa: E402


@pytest.fixture
def tiny_table() -> EmbeddingTable:
    return EmbeddingTable(
        dimension=2,
        entries={
            "a": np.array([1.0, 0.0]),
            "b": np.array([0.0, 1.0]),
            "c": np.array([2.0, 4.0]),
        },
    )


@pytest.fixture
def docs_ab() -> list[Document]:
    return [
        Document(0, "a b"),
        Document(1, "zzz qqq"),
        Document(2, "c c"),
    ]
