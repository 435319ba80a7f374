#!/usr/bin/env python3

from .cumulative import cumulative_precision, cumulative_recall, EpisodeTrace, precision_curve, recall_curve
from .diversity import (
    alpha_dcg,
    alpha_ndcg,
    alpha_ndcg_curve,
    exact_ideal_gain,
    greedy_ideal_order,
    ideal_gain,
    topic_coverage,
)
from .report import DEFAULT_CUTOFFS, metric_curves, metric_table

__all__ = [
    "DEFAULT_CUTOFFS",
    "EpisodeTrace",
    "alpha_dcg",
    "alpha_ndcg",
    "alpha_ndcg_curve",
    "cumulative_precision",
    "cumulative_recall",
    "exact_ideal_gain",
    "greedy_ideal_order",
    "ideal_gain",
    "metric_curves",
    "metric_table",
    "precision_curve",
    "recall_curve",
    "topic_coverage",
]
