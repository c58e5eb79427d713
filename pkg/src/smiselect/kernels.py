"""Pairwise similarity kernels in [0, 1] for the SMI objectives."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ContractViolation
from .features import FeatureMatrix

#: Supported similarity measures. ``cosine-rescaled`` maps cosine to [0, 1]
#: via (1 + cos)/2. ``cosine-raw`` is an escape hatch that skips the shift
#: and therefore breaks the [0, 1] range contract; it is never used in
#: headline configurations.
MEASURES = ("cosine-rescaled", "rbf", "cosine-raw")


@dataclass
class SimilarityKernel:
    """Dense block of pairwise similarities with id provenance."""

    values: np.ndarray
    measure: str
    row_ids: list[int]
    col_ids: list[int]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass
class KernelSet:
    """The kernel blocks one SMI variant needs; unneeded blocks stay None."""

    uq: SimilarityKernel
    uu: SimilarityKernel | None = None
    qq: SimilarityKernel | None = None


def cosine_rescaled(u: np.ndarray, v: np.ndarray) -> float:
    """(1 + cos(u, v)) / 2, clipped to [0, 1]; 0 if either vector is zero."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ContractViolation(f"vector length mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    c = float(np.dot(u, v) / (nu * nv))
    return min(1.0, max(0.0, 0.5 * (1.0 + c)))


def rbf_similarity(u: np.ndarray, v: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||u - v||^2)."""
    if gamma <= 0:
        raise ConfigError(f"rbf gamma must be positive, got {gamma}")
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ContractViolation(f"vector length mismatch: {u.shape} vs {v.shape}")
    d = u - v
    return float(np.exp(-gamma * np.dot(d, d)))


def _cosine_block(a: np.ndarray, b: np.ndarray, rescale: bool) -> np.ndarray:
    na = np.linalg.norm(a, axis=1)
    nb = np.linalg.norm(b, axis=1)
    an = np.divide(a, na[:, None], out=np.zeros_like(a), where=na[:, None] > 0)
    bn = np.divide(b, nb[:, None], out=np.zeros_like(b), where=nb[:, None] > 0)
    cos = an @ bn.T
    if rescale:
        s = np.clip(0.5 * (1.0 + cos), 0.0, 1.0)
        # zero-norm rows/cols are similar to nothing, not 0.5 to everything
        s[na == 0, :] = 0.0
        s[:, nb == 0] = 0.0
        return s
    return cos


def _rbf_block(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    sq = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


def _block(a: FeatureMatrix, b: FeatureMatrix, measure: str, gamma: float) -> SimilarityKernel:
    if measure == "cosine-rescaled":
        values = _cosine_block(a.data, b.data, rescale=True)
    elif measure == "cosine-raw":
        values = _cosine_block(a.data, b.data, rescale=False)
    elif measure == "rbf":
        if gamma <= 0:
            raise ConfigError(f"rbf gamma must be positive, got {gamma}")
        values = _rbf_block(a.data, b.data, gamma)
    else:
        raise ConfigError(f"unknown similarity measure {measure!r}")
    if a is b:
        values = 0.5 * (values + values.T)
        if measure == "rbf":
            np.fill_diagonal(values, 1.0)
        else:
            # cosine self-similarity is exactly 1, except zero vectors which
            # are defined to be similar to nothing
            norms = np.linalg.norm(a.data, axis=1)
            np.fill_diagonal(values, np.where(norms > 0, 1.0, 0.0))
    return SimilarityKernel(values=values, measure=measure, row_ids=list(a.ids), col_ids=list(b.ids))


def kernel_blocks_needed(variant: str) -> frozenset[str]:
    """Which blocks a Table-1 variant touches: GCMI/FLQMI only cross
    similarities, FLVMI also within-unlabeled, LOGDETMI all three."""
    v = variant.lower()
    if v in ("gcmi", "flqmi"):
        return frozenset({"uq"})
    if v == "flvmi":
        return frozenset({"uu", "uq"})
    if v == "logdetmi":
        return frozenset({"uu", "uq", "qq"})
    raise ConfigError(f"unknown SMI variant {variant!r}")


def build_kernels(
    unlabeled: FeatureMatrix,
    query: FeatureMatrix,
    measure: str = "cosine-rescaled",
    variant: str = "flqmi",
    gamma: float = 1.0,
) -> KernelSet:
    """Compute exactly the similarity blocks ``variant`` consumes."""
    if unlabeled.dimension != query.dimension:
        raise ContractViolation(
            f"feature dimension mismatch: {unlabeled.dimension} vs {query.dimension}"
        )
    needed = kernel_blocks_needed(variant)
    uq = _block(unlabeled, query, measure, gamma)
    uu = _block(unlabeled, unlabeled, measure, gamma) if "uu" in needed else None
    qq = _block(query, query, measure, gamma) if "qq" in needed else None
    return KernelSet(uq=uq, uu=uu, qq=qq)
