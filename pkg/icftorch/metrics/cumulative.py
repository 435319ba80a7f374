#!/usr/bin/env python3

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .. import settings
from ..utils.warnings import EmptyRecallWarning


@dataclass(frozen=True)
class EpisodeTrace:
    """
    The recommendations served to one user in one evaluation episode.

    :ivar items: Recommended items, in order.
    :ivar ratings: Logged rating of every recommended item.
    :ivar satisfied: :math:`b_t = 1` iff the rating reaches :func:`icftorch.settings.satisfaction_threshold`.
    """

    user_id: int
    items: Tuple[int, ...] = ()
    ratings: Tuple[int, ...] = ()
    satisfied: Tuple[int, ...] = ()

    def __post_init__(self):
        if not len(self.items) == len(self.ratings) == len(self.satisfied):
            raise ValueError("items, ratings and satisfied flags must have the same length")
        threshold = settings.satisfaction_threshold.value()
        for rating, b in zip(self.ratings, self.satisfied):
            if b != int(rating >= threshold):
                raise ValueError(f"satisfied flag {b} inconsistent with rating {rating}")

    @classmethod
    def from_steps(cls, user_id: int, steps: Iterable[Tuple[int, int]]) -> EpisodeTrace:
        """Builds a trace from ``(item, rating)`` pairs, deriving the satisfied flags."""
        threshold = settings.satisfaction_threshold.value()
        steps = list(steps)
        items = tuple(int(i) for i, _ in steps)
        ratings = tuple(int(r) for _, r in steps)
        return cls(user_id, items, ratings, tuple(int(r >= threshold) for r in ratings))

    def __len__(self) -> int:
        return len(self.items)

    def hits(self, T: int) -> int:
        """Satisfied recommendations among the first ``T`` steps. Steps past the episode end count as 0."""
        return sum(self.satisfied[:T])

    def cumulative_hits(self, T: int) -> np.ndarray:
        padded = np.zeros(T, dtype=np.int64)
        head = self.satisfied[:T]
        padded[: len(head)] = head
        return np.cumsum(padded)


def _check_cutoff(T: int) -> None:
    if T < 1:
        raise ValueError(f"cutoff T must be at least 1, got {T}")


def cumulative_precision(traces: Sequence[EpisodeTrace], T: int) -> float:
    r"""
    Mean number of satisfied recommendations in the first :math:`T` steps,

    .. math::
        \text{precision}@T = \frac{1}{\#\text{users}} \sum_{u} \sum_{t=1}^T b_t.
    """
    _check_cutoff(T)
    if not traces:
        raise ValueError("no traces to evaluate")
    return float(np.mean([trace.hits(T) for trace in traces]))


def cumulative_recall(traces: Sequence[EpisodeTrace], T: int, satisfied_counts: Mapping[int, int]) -> float:
    r"""
    Mean fraction of each user's satisfied items found in the first :math:`T` steps,

    .. math::
        \text{recall}@T = \frac{1}{\#\text{users}} \sum_{u} \sum_{t=1}^T \frac{b_t}{\#\text{satisfied items of } u}.

    Users without any satisfied item are left out.

    :raises KeyError: if a traced user has no entry in :attr:`satisfied_counts`.
    """
    _check_cutoff(T)
    ratios = []
    for trace in traces:
        count = satisfied_counts[trace.user_id]
        if count > 0:
            ratios.append(trace.hits(T) / count)
    if not ratios:
        warnings.warn("No evaluated user has a satisfied item; recall is reported as 0.", EmptyRecallWarning)
        return 0.0
    return float(np.mean(ratios))


def precision_curve(traces: Sequence[EpisodeTrace], T: int) -> np.ndarray:
    """Cumulative precision at every cutoff ``1..T``."""
    _check_cutoff(T)
    if not traces:
        raise ValueError("no traces to evaluate")
    return np.mean([trace.cumulative_hits(T) for trace in traces], axis=0)


def recall_curve(traces: Sequence[EpisodeTrace], T: int, satisfied_counts: Mapping[int, int]) -> np.ndarray:
    _check_cutoff(T)
    rows: List[np.ndarray] = []
    for trace in traces:
        count = satisfied_counts[trace.user_id]
        if count > 0:
            rows.append(trace.cumulative_hits(T) / count)
    if not rows:
        warnings.warn("No evaluated user has a satisfied item; recall is reported as 0.", EmptyRecallWarning)
        return np.zeros(T)
    return np.mean(rows, axis=0)
