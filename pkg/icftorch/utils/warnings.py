#!/usr/bin/env python3

from linear_operator.utils.warnings import NumericalWarning


class ZeroNormalizerWarning(UserWarning):
    """
    Warning thrown when an α-NDCG normalizer is zero (no item of the ranking carries a topic).
    The metric is reported as 0 in that case.
    """

    pass


class EmptyRecallWarning(UserWarning):
    """
    Warning thrown when cumulative recall is requested but no evaluated user has a satisfied item.
    """

    pass


class OldVersionWarning(UserWarning):
    """
    Warning thrown when loading a checkpoint written by an older version of the icftorch checkpoint format.
    """

    pass


__all__ = [
    "EmptyRecallWarning",
    "NumericalWarning",
    "OldVersionWarning",
    "ZeroNormalizerWarning",
]
