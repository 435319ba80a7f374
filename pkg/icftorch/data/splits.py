#!/usr/bin/env python3

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import FrozenSet, Tuple

import numpy as np
import pandas as pd

from .ratings import RatingLog


@dataclass(frozen=True)
class UserSplit:
    """Three user-disjoint sets: training, validation (tuning, early stopping) and test (evaluation)."""

    train: FrozenSet[int]
    valid: FrozenSet[int]
    test: FrozenSet[int]
    seed: int

    def to_frame(self, log: RatingLog) -> pd.DataFrame:
        """One row per user with its original id and the name of its set, ordered by dense id."""
        rows = [(u, log.user_index[u], name) for name in ("train", "valid", "test") for u in getattr(self, name)]
        frame = pd.DataFrame(rows, columns=["user", "original_id", "set"])
        return frame.sort_values("user").reset_index(drop=True)


def split_users(
    log: RatingLog, fractions: Tuple[float, float, float] = (0.85, 0.05, 0.10), seed: int = 0
) -> UserSplit:
    """
    Partitions the users of :attr:`log` by a seeded permutation.

    Set sizes are the rounded fractions of the number of users (the test set takes the remainder),
    so each is within one user of the requested share.

    :param fractions: (train, valid, test) shares, summing to 1.
    :param seed: Seed of the permutation. Equal seeds give equal splits.
    """
    if len(fractions) != 3 or any(f < 0 for f in fractions):
        raise ValueError(f"fractions must be three nonnegative shares, got {fractions}")
    if not math.isclose(sum(fractions), 1.0, rel_tol=0.0, abs_tol=1e-9):
        raise ValueError(f"fractions must sum to 1, got {sum(fractions)}")
    n = log.n_users
    if n == 0:
        raise ValueError("Cannot split an empty rating log")

    permutation = np.random.default_rng(seed).permutation(n)
    n_train = int(round(fractions[0] * n))
    n_valid = min(int(round(fractions[1] * n)), n - n_train)
    return UserSplit(
        train=frozenset(int(u) for u in permutation[:n_train]),
        valid=frozenset(int(u) for u in permutation[n_train : n_train + n_valid]),
        test=frozenset(int(u) for u in permutation[n_train + n_valid :]),
        seed=seed,
    )
