#!/usr/bin/env python3

import itertools
import math
import warnings
from collections import Counter
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .. import settings
from ..data.topics import TopicCatalog
from ..utils.warnings import ZeroNormalizerWarning


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _step_gain(topics, seen: Counter, alpha: float) -> float:
    return sum((1 - alpha) ** seen[topic] for topic in topics)


def alpha_dcg(items: Sequence[int], catalog: TopicCatalog, alpha: float = 0.5, T: Optional[int] = None) -> float:
    r"""
    Diversity-aware discounted cumulative gain of a ranking,

    .. math::
        \text{DCG}@T = \sum_{t=1}^T \frac{1}{\log_2(1 + t)} \sum_{i \in \text{topics}(t)} (1 - \alpha)^{c_{i,t} - 1},

    where :math:`c_{i,t}` counts the occurrences of topic :math:`i` in positions :math:`1..t`.
    """
    _check_alpha(alpha)
    items = list(items) if T is None else list(items)[:T]
    seen: Counter = Counter()
    dcg = 0.0
    for t, item in enumerate(items, start=1):
        topics = catalog[item]
        dcg += _step_gain(topics, seen, alpha) / math.log2(1 + t)
        seen.update(topics)
    return dcg


def greedy_ideal_order(items: Sequence[int], catalog: TopicCatalog, alpha: float = 0.5) -> List[int]:
    """Orders :attr:`items` by repeatedly taking the largest incremental gain (ties to the lowest item id)."""
    _check_alpha(alpha)
    pool = sorted(items)
    seen: Counter = Counter()
    order = []
    while pool:
        gains = [_step_gain(catalog[item], seen, alpha) for item in pool]
        best = int(np.argmax(gains))
        item = pool.pop(best)
        order.append(item)
        seen.update(catalog[item])
    return order


def exact_ideal_gain(items: Sequence[int], catalog: TopicCatalog, alpha: float = 0.5, T: Optional[int] = None) -> float:
    """Largest :func:`alpha_dcg` over every permutation of :attr:`items`."""
    T = len(items) if T is None else T
    return max(alpha_dcg(perm, catalog, alpha, T) for perm in itertools.permutations(items))


def ideal_gain(items: Sequence[int], catalog: TopicCatalog, alpha: float = 0.5, T: Optional[int] = None) -> float:
    """
    Normalizer Z of α-NDCG: the DCG of the best ordering of the same items.

    Up to :func:`icftorch.settings.max_exact_ideal_size` items the permutations are searched exhaustively,
    larger sets take the better of :func:`greedy_ideal_order` and the given order, so Z never
    falls below the DCG of the ranking itself.
    Greedy construction is exact for single-topic items but can fall short once items share topics.
    """
    _check_alpha(alpha)
    items = list(items)
    if len(items) <= settings.max_exact_ideal_size.value():
        return exact_ideal_gain(items, catalog, alpha, T)
    greedy = alpha_dcg(greedy_ideal_order(items, catalog, alpha), catalog, alpha, T)
    return max(greedy, alpha_dcg(items, catalog, alpha, T))


def alpha_ndcg(items: Sequence[int], catalog: TopicCatalog, alpha: float = 0.5, T: Optional[int] = None) -> float:
    """
    :func:`alpha_dcg` divided by :func:`ideal_gain` over the first ``T`` items. A ranking without any topic
    gets 0 and a :class:`~icftorch.utils.warnings.ZeroNormalizerWarning`.
    """
    head = list(items) if T is None else list(items)[:T]
    normalizer = ideal_gain(head, catalog, alpha)
    if normalizer <= 0:
        warnings.warn("α-NDCG normalizer is 0 (no topics in the ranking); reporting 0.", ZeroNormalizerWarning)
        return 0.0
    return alpha_dcg(head, catalog, alpha) / normalizer


def alpha_ndcg_curve(items: Sequence[int], catalog: TopicCatalog, alpha: float = 0.5, T: int = 40) -> np.ndarray:
    """α-NDCG of every prefix ``1..T``. Past the end of the ranking the last value is repeated."""
    if T < 1:
        raise ValueError(f"cutoff T must be at least 1, got {T}")
    curve = np.zeros(T)
    items = list(items)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ZeroNormalizerWarning)
        for t in range(1, min(T, len(items)) + 1):
            curve[t - 1] = alpha_ndcg(items, catalog, alpha, t)
    if 0 < len(items) < T:
        curve[len(items) :] = curve[len(items) - 1]
    return curve


def topic_coverage(items: Sequence[int], catalog: TopicCatalog) -> Tuple[int, int]:
    """Number of distinct topics among :attr:`items` and in the whole catalog."""
    covered = frozenset().union(*(catalog[item] for item in items)) if items else frozenset()
    return len(covered), len(catalog.universe)
