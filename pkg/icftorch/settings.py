#!/usr/bin/env python3

import os

import torch
from gpytorch.settings import _feature_flag, _value_context


class dtype(_value_context):
    """
    The floating point type used for every tensor created by icftorch.
    Gradient checks at a 1e-4 relative tolerance need 64-bit precision, so changing this
    is only meant for quick experiments.

    (Default: torch.float64)
    """

    _global_value = torch.float64


class satisfaction_threshold(_value_context):
    """
    The smallest rating counted as a satisfied recommendation (b_t = 1).

    (Default: 4)
    """

    _global_value = 4


class num_eval_workers(_value_context):
    """
    Number of worker threads used to roll out evaluation episodes.
    When no context is active, the value is read from the ``ICFTORCH_NUM_WORKERS`` environment variable.

    (Default: 1)
    """

    _global_value = None

    @classmethod
    def value(cls):
        if cls._global_value is not None:
            return cls._global_value
        return max(1, int(os.environ.get("ICFTORCH_NUM_WORKERS", "1")))


class max_exact_ideal_size(_value_context):
    """
    If a ranking has at most this many items, the α-NDCG normalizer is computed by exhaustive
    search over permutations. Larger rankings use the greedy ideal ordering.

    (Default: 6)
    """

    _global_value = 6


class finite_difference_step(_value_context):
    """
    Step used by :func:`~icftorch.functions.finite_diff_grad` when none is given.

    (Default: 1e-5)
    """

    _global_value = 1e-5


class validate_cache(_feature_flag):
    """
    Whether :meth:`~icftorch.models.QNetwork.backward` checks that the forward cache was
    produced with the parameters being differentiated.

    (Default: True)
    """

    _default = True


__all__ = [
    "dtype",
    "finite_difference_step",
    "max_exact_ideal_size",
    "num_eval_workers",
    "satisfaction_threshold",
    "validate_cache",
]
