"""Cardinality-constrained greedy maximization: naive, lazy, and stochastic.

All three share one total order for ties (higher gain first, then lower id)
so lazy and full-sample stochastic runs reproduce the naive id sequence
exactly whenever the objective has diminishing returns.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from typing import Any, Protocol, Sequence

import numpy as np

from .errors import ConfigError, ContractViolation


class IncrementalObjective(Protocol):
    """What the optimizers need from an objective (see smi.SmiObjective)."""

    def new_state(self) -> Any: ...

    def marginal_gain(self, state: Any, a: int) -> float: ...

    def update_state(self, state: Any, a: int) -> None: ...


@dataclass
class SelectionResult:
    selected_ids: list[int]
    gains: list[float]
    objective_trajectory: list[float]
    wall_time: float
    evaluations: int


def _check_ground(ground: Sequence[int], budget: int) -> list[int]:
    ids = sorted(ground)
    if len(set(ids)) != len(ids):
        raise ContractViolation("ground set contains duplicate ids")
    if budget < 1:
        raise ConfigError(f"budget must be at least 1, got {budget}")
    if budget > len(ids):
        raise ConfigError(f"budget {budget} exceeds ground set size {len(ids)}")
    return ids


def naive_greedy(obj: IncrementalObjective, ground: Sequence[int], budget: int) -> SelectionResult:
    """Re-evaluate every remaining candidate each step; pick the best."""
    remaining = _check_ground(ground, budget)
    start = time.perf_counter()
    state = obj.new_state()
    selected: list[int] = []
    gains: list[float] = []
    trajectory: list[float] = []
    total = 0.0
    evaluations = 0
    for _ in range(budget):
        best_id, best_gain = None, -math.inf
        for a in remaining:  # ascending ids: strict > keeps the lowest id on ties
            g = obj.marginal_gain(state, a)
            evaluations += 1
            if g > best_gain:
                best_id, best_gain = a, g
        obj.update_state(state, best_id)
        remaining.remove(best_id)
        selected.append(best_id)
        gains.append(best_gain)
        total += best_gain
        trajectory.append(total)
    return SelectionResult(selected, gains, trajectory, time.perf_counter() - start, evaluations)


def lazy_greedy(obj: IncrementalObjective, ground: Sequence[int], budget: int) -> SelectionResult:
    """Accelerated greedy over a priority queue of stale upper bounds.

    Each heap entry is (-gain, id, step-stamp); an entry is fresh when its
    stamp matches the current step. The top is re-evaluated until its
    refreshed gain still beats the next bound under the (gain, -id) order,
    which matches naive_greedy exactly for diminishing-returns objectives.
    """
    ids = _check_ground(ground, budget)
    start = time.perf_counter()
    state = obj.new_state()
    heap = []
    evaluations = 0
    for a in ids:
        heap.append((-obj.marginal_gain(state, a), a, 0))
        evaluations += 1
    heapq.heapify(heap)

    selected: list[int] = []
    gains: list[float] = []
    trajectory: list[float] = []
    total = 0.0
    step = 0
    while len(selected) < budget:
        neg_gain, a, stamp = heapq.heappop(heap)
        if stamp == step:
            gain = -neg_gain
        else:
            gain = obj.marginal_gain(state, a)
            evaluations += 1
            if heap and (-gain, a) > (heap[0][0], heap[0][1]):
                heapq.heappush(heap, (-gain, a, step))
                continue
        obj.update_state(state, a)
        selected.append(a)
        gains.append(gain)
        total += gain
        trajectory.append(total)
        step += 1
    return SelectionResult(selected, gains, trajectory, time.perf_counter() - start, evaluations)


def default_sample_size(n: int, budget: int, failure_prob: float = 0.01) -> int:
    """Per-step sample size following the (n/B) * ln(1/eps) convention."""
    return math.ceil((n / budget) * math.log(1.0 / failure_prob))


def stochastic_greedy(
    obj: IncrementalObjective,
    ground: Sequence[int],
    budget: int,
    sample_size: int | None = None,
    seed: int = 0,
) -> SelectionResult:
    """Each step maximizes over a fresh uniform sample of the remaining ids."""
    remaining = _check_ground(ground, budget)
    if sample_size is None:
        sample_size = default_sample_size(len(remaining), budget)
        sample_size = min(sample_size, len(remaining))
    if sample_size < 1 or sample_size > len(remaining):
        raise ConfigError(f"sample_size {sample_size} out of range 1..{len(remaining)}")
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    state = obj.new_state()
    selected: list[int] = []
    gains: list[float] = []
    trajectory: list[float] = []
    total = 0.0
    evaluations = 0
    for _ in range(budget):
        k = min(sample_size, len(remaining))
        picks = rng.choice(len(remaining), size=k, replace=False)
        best_id, best_gain = None, -math.inf
        for i in np.sort(picks):
            a = remaining[i]
            g = obj.marginal_gain(state, a)
            evaluations += 1
            if g > best_gain:
                best_id, best_gain = a, g
        obj.update_state(state, best_id)
        remaining.remove(best_id)
        selected.append(best_id)
        gains.append(best_gain)
        total += best_gain
        trajectory.append(total)
    return SelectionResult(selected, gains, trajectory, time.perf_counter() - start, evaluations)
