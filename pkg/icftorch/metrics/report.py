#!/usr/bin/env python3

from typing import Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from ..data.topics import TopicCatalog
from .cumulative import EpisodeTrace, precision_curve, recall_curve
from .diversity import alpha_ndcg_curve

DEFAULT_CUTOFFS = (5, 10, 20, 40)


def metric_curves(
    traces: Sequence[EpisodeTrace],
    satisfied_counts: Mapping[int, int],
    T: int,
    catalog: Optional[TopicCatalog] = None,
    alpha: float = 0.5,
) -> pd.DataFrame:
    """
    Per-step cumulative precision, recall and α-NDCG, averaged over users.

    :return: A frame with columns ``T, precision, recall, alpha_ndcg`` and one row per step ``1..T``.
        ``alpha_ndcg`` is NaN without a topic catalog.
    """
    frame = pd.DataFrame(
        {
            "T": np.arange(1, T + 1),
            "precision": precision_curve(traces, T),
            "recall": recall_curve(traces, T, satisfied_counts),
        }
    )
    if catalog is None:
        frame["alpha_ndcg"] = np.nan
    else:
        frame["alpha_ndcg"] = np.mean([alpha_ndcg_curve(trace.items, catalog, alpha, T) for trace in traces], axis=0)
    return frame


def metric_table(
    traces: Sequence[EpisodeTrace],
    satisfied_counts: Mapping[int, int],
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    catalog: Optional[TopicCatalog] = None,
    alpha: float = 0.5,
) -> pd.DataFrame:
    """The rows of :func:`metric_curves` at the given cutoffs."""
    if not cutoffs or min(cutoffs) < 1:
        raise ValueError(f"cutoffs must be positive, got {tuple(cutoffs)}")
    curves = metric_curves(traces, satisfied_counts, max(cutoffs), catalog, alpha)
    return curves[curves["T"].isin(cutoffs)].reset_index(drop=True)
