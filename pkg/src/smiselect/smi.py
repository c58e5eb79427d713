"""The four submodular-mutual-information objectives and their incremental state.

Each objective scores a candidate set A of unlabeled instances against a
fixed query set Q through similarity kernels:

    flvmi     sum_i min(max_{j in A} s_ij, max_{j in Q} s_ij) over all unlabeled i
    flqmi     sum_{j in Q} max_{a in A} s_aj  +  sum_{a in A} max_{j in Q} s_aj
    gcmi      2 * lam * sum_{a in A} sum_{j in Q} s_aj
    logdetmi  logdet(S_A + eps I) - logdet(S_A - S_AQ (S_Q + eps I)^-1 S_QA + eps I)

``evaluate`` always recomputes from scratch; ``marginal_gain`` /
``update_state`` maintain memoized running maxima (flvmi, flqmi) or two
incrementally bordered Cholesky factors (logdetmi) so a gain costs O(n),
O(q), O(1), O(|A|^2 + q) respectively instead of a full re-evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import ConfigError, ContractViolation, NumericalDegeneracyError
from .kernels import KernelSet, kernel_blocks_needed

VARIANTS = ("flvmi", "flqmi", "gcmi", "logdetmi")


@dataclass
class SelectionState:
    """Mutable per-selection memo owned by a single optimizer run.

    ``value`` tracks the objective of ``selected`` incrementally and must
    agree with a from-scratch ``evaluate`` within 1e-8 at all times.
    """

    selected: list[int] = field(default_factory=list)
    value: float = 0.0
    # flvmi: max_{j in A} s_ij for every unlabeled i
    m_unlabeled: np.ndarray | None = None
    # flqmi: max_{a in A} s_aj for every query j
    m_query: np.ndarray | None = None
    # logdetmi: lower Cholesky factors of S_A + eps I and of the
    # query-conditional matrix, grown one bordering row per update
    chol_plain: np.ndarray | None = None
    chol_cond: np.ndarray | None = None


class SmiObjective:
    """One Table-style SMI instantiation over a fixed kernel set.

    Immutable after construction; safe to share across concurrent gain
    evaluations. ``lam`` only matters for gcmi (and provably never changes
    the greedy argmax order); ``epsilon`` regularizes both S_A and S_Q for
    logdetmi and defaults to 1e-6 times the mean kernel diagonal.
    """

    def __init__(
        self,
        variant: str,
        kernels: KernelSet,
        lam: float = 1.0,
        epsilon: float | None = None,
    ):
        variant = variant.lower()
        if variant not in VARIANTS:
            raise ConfigError(f"unknown SMI variant {variant!r}")
        if lam <= 0:
            raise ConfigError(f"lambda must be positive, got {lam}")
        if epsilon is not None and epsilon <= 0:
            raise ConfigError(f"epsilon must be positive, got {epsilon}")
        needed = kernel_blocks_needed(variant)
        if "uu" in needed and kernels.uu is None:
            raise ContractViolation(f"{variant} requires the unlabeled-unlabeled kernel block")
        if "qq" in needed and kernels.qq is None:
            raise ContractViolation(f"{variant} requires the query-query kernel block")

        self.variant = variant
        self.lam = float(lam)
        self.kernels = kernels
        self.unlabeled_ids = list(kernels.uq.row_ids)
        self.query_ids = list(kernels.uq.col_ids)
        self._index = {doc_id: i for i, doc_id in enumerate(self.unlabeled_ids)}
        if len(self._index) != len(self.unlabeled_ids):
            raise ContractViolation("duplicate ids in the unlabeled kernel rows")

        self._uq = np.asarray(kernels.uq.values, dtype=np.float64)
        self._qmax = self._uq.max(axis=1) if self._uq.shape[1] else np.zeros(len(self.unlabeled_ids))
        self._qsum = self._uq.sum(axis=1)
        self._uu = None
        if kernels.uu is not None:
            if kernels.uu.row_ids != self.unlabeled_ids or kernels.uu.col_ids != self.unlabeled_ids:
                raise ContractViolation("unlabeled kernel block ids disagree with the cross block")
            self._uu = np.asarray(kernels.uu.values, dtype=np.float64)

        self.epsilon = float(epsilon) if epsilon is not None else 0.0
        self._t = None
        self._t2 = None
        if variant == "logdetmi":
            if kernels.qq.row_ids != self.query_ids or kernels.qq.col_ids != self.query_ids:
                raise ContractViolation("query kernel block ids disagree with the cross block")
            if epsilon is None:
                mean_diag = float(np.mean(np.diag(self._uu)))
                if mean_diag <= 0:
                    raise ConfigError(
                        "kernel diagonal is zero; pass an explicit epsilon for logdetmi"
                    )
                self.epsilon = 1e-6 * mean_diag
            qq = np.asarray(kernels.qq.values, dtype=np.float64)
            lq = np.linalg.cholesky(qq + self.epsilon * np.eye(qq.shape[0]))
            # T[:, i] = L_Q^-1 s_{Q,i}; then the conditional kernel entry is
            # s_ij - T[:, i] . T[:, j]
            self._t = solve_triangular(lq, self._uq.T, lower=True)
            self._t2 = np.sum(self._t * self._t, axis=0)

    # -- id plumbing ---------------------------------------------------

    def _idx(self, doc_id: int) -> int:
        try:
            return self._index[doc_id]
        except KeyError:
            raise ContractViolation(f"unknown unlabeled document id {doc_id}") from None

    # -- from-scratch evaluation ----------------------------------------

    def evaluate(self, selected: list[int]) -> float:
        """Objective value of ``selected``, recomputed with no memoization."""
        if len(set(selected)) != len(selected):
            raise ContractViolation("selected ids contain duplicates")
        idx = [self._idx(a) for a in selected]
        if not idx:
            return 0.0
        if self.variant == "flvmi":
            m = self._uu[:, idx].max(axis=1)
            return float(np.minimum(m, self._qmax).sum())
        if self.variant == "flqmi":
            return float(self._uq[idx].max(axis=0).sum() + self._qmax[idx].sum())
        if self.variant == "gcmi":
            return 2.0 * self.lam * float(self._qsum[idx].sum())
        sa = self._uu[np.ix_(idx, idx)] + self.epsilon * np.eye(len(idx))
        tcols = self._t[:, idx]
        cond = sa - tcols.T @ tcols
        sign_a, logdet_a = np.linalg.slogdet(sa)
        sign_c, logdet_c = np.linalg.slogdet(cond)
        if sign_a <= 0 or sign_c <= 0:
            raise NumericalDegeneracyError(
                f"non-positive-definite kernel submatrix for ids {selected}"
            )
        return float(logdet_a - logdet_c)

    # -- incremental interface (consumed by the optimizers) --------------

    def new_state(self) -> SelectionState:
        state = SelectionState()
        if self.variant == "flvmi":
            state.m_unlabeled = np.zeros(self._uu.shape[0])
        elif self.variant == "flqmi":
            state.m_query = np.zeros(self._uq.shape[1])
        elif self.variant == "logdetmi":
            state.chol_plain = np.zeros((0, 0))
            state.chol_cond = np.zeros((0, 0))
        return state

    def marginal_gain(self, state: SelectionState, a: int) -> float:
        """evaluate(A + [a]) - evaluate(A), computed incrementally."""
        ia = self._idx(a)
        if a in state.selected:
            raise ContractViolation(f"id {a} is already selected")
        if self.variant == "flvmi":
            new_m = np.maximum(state.m_unlabeled, self._uu[:, ia])
            q = self._qmax
            return float(
                (np.minimum(new_m, q) - np.minimum(state.m_unlabeled, q)).sum()
            )
        if self.variant == "flqmi":
            cover = np.maximum(0.0, self._uq[ia] - state.m_query).sum()
            return float(cover + self._qmax[ia])
        if self.variant == "gcmi":
            return 2.0 * self.lam * float(self._qsum[ia])
        d_plain, d_cond, _, _ = self._logdet_border(state, ia, a)
        return math.log(d_plain) - math.log(d_cond)

    def update_state(self, state: SelectionState, a: int) -> None:
        """Add ``a`` to the selection, refreshing memos and the cached value."""
        ia = self._idx(a)
        if a in state.selected:
            raise ContractViolation(f"id {a} is already selected")
        if self.variant == "flvmi":
            new_m = np.maximum(state.m_unlabeled, self._uu[:, ia])
            q = self._qmax
            state.value += float(
                (np.minimum(new_m, q) - np.minimum(state.m_unlabeled, q)).sum()
            )
            state.m_unlabeled = new_m
        elif self.variant == "flqmi":
            cover = np.maximum(0.0, self._uq[ia] - state.m_query).sum()
            state.value += float(cover + self._qmax[ia])
            state.m_query = np.maximum(state.m_query, self._uq[ia])
        elif self.variant == "gcmi":
            state.value += 2.0 * self.lam * float(self._qsum[ia])
        else:
            d_plain, d_cond, w_plain, w_cond = self._logdet_border(state, ia, a)
            state.chol_plain = _bordered(state.chol_plain, w_plain, math.sqrt(d_plain))
            state.chol_cond = _bordered(state.chol_cond, w_cond, math.sqrt(d_cond))
            state.value += math.log(d_plain) - math.log(d_cond)
        state.selected.append(a)

    def _logdet_border(self, state: SelectionState, ia: int, a: int):
        """Schur complements of a against both factors, plus the border rows."""
        sel = [self._idx(s) for s in state.selected]
        s_aa = self._uu[ia, ia] + self.epsilon
        if sel:
            v_plain = self._uu[sel, ia]
            w_plain = solve_triangular(state.chol_plain, v_plain, lower=True)
            d_plain = s_aa - float(w_plain @ w_plain)
            v_cond = v_plain - self._t[:, sel].T @ self._t[:, ia]
            w_cond = solve_triangular(state.chol_cond, v_cond, lower=True)
            d_cond = s_aa - self._t2[ia] - float(w_cond @ w_cond)
        else:
            w_plain = np.zeros(0)
            w_cond = np.zeros(0)
            d_plain = s_aa
            d_cond = s_aa - self._t2[ia]
        if d_plain <= 0 or d_cond <= 0:
            raise NumericalDegeneracyError(
                f"Schur complement lost positivity adding id {a} "
                f"(plain {d_plain:.3e}, conditional {d_cond:.3e}); "
                f"increase epsilon or drop near-duplicate documents"
            )
        return d_plain, d_cond, w_plain, w_cond


def _bordered(chol: np.ndarray, w: np.ndarray, diag: float) -> np.ndarray:
    k = chol.shape[0]
    out = np.zeros((k + 1, k + 1))
    out[:k, :k] = chol
    out[k, :k] = w
    out[k, k] = diag
    return out
