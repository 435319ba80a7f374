#!/usr/bin/env python3

from typing import Mapping, Sequence

import numpy as np

from ..data.ratings import parse_ratings, RatingLog
from ..data.splits import UserSplit


def log_from_matrix(ratings: Sequence[Mapping[int, int]], max_rating: int = 5) -> RatingLog:
    """
    Builds a log where user ``u`` rated the items of ``ratings[u]``. Original ids equal dense ids
    as long as every user and item first appears in order.
    """
    lines = [f"{u}::{i}::{r}::{u * 1000 + t}" for u, row in enumerate(ratings) for t, (i, r) in enumerate(row.items())]
    return parse_ratings(lines, "movielens_dat", max_rating)


def random_log(
    n_users: int = 20, n_items: int = 15, density: float = 0.5, max_rating: int = 5, seed: int = 0
) -> RatingLog:
    """A log where every user rates at least one item, each item with probability :attr:`density`."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n_users):
        rated = rng.random(n_items) < density
        rated[rng.integers(n_items)] = True
        rows.append({int(i): int(rng.integers(1, max_rating + 1)) for i in np.flatnonzero(rated)})
    lines = [f"{u},{i},{r}" for u, row in enumerate(rows) for i, r in row.items()]
    return parse_ratings(["user,item,rating"] + lines, "csv", max_rating)


def all_train_split(log: RatingLog) -> UserSplit:
    return UserSplit(frozenset(range(log.n_users)), frozenset(), frozenset(), seed=0)
