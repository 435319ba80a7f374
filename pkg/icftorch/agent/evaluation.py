#!/usr/bin/env python3

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Union

import pandas as pd
import torch

from .. import settings
from ..data.environment import EnvState, env_reset, env_step
from ..data.ratings import RatingLog
from ..data.topics import TopicCatalog
from ..metrics import DEFAULT_CUTOFFS, EpisodeTrace, metric_curves
from .policy import Policy

_logger = logging.getLogger(__name__)

PolicyLike = Union[Policy, Callable[[EnvState, torch.Generator], int]]


@dataclass
class Evaluation:
    """
    Outcome of :func:`evaluate`.

    :ivar traces: One trace per evaluated user, in user order.
    :ivar curves: Cumulative metrics at every step ``1..horizon``.
    :ivar table: The rows of :attr:`curves` at the reporting cutoffs.
    """

    traces: List[EpisodeTrace]
    curves: pd.DataFrame
    table: pd.DataFrame

    def precision_at(self, T: int) -> float:
        return float(self.curves.loc[self.curves["T"] == min(T, len(self.curves)), "precision"].iloc[0])


def episode_generator(seed: int, user_id: int) -> torch.Generator:
    """Random stream of one user's episode, independent of the evaluation order."""
    return torch.Generator().manual_seed((seed * 1_000_003 + user_id) % (2**63))


def rollout(policy: PolicyLike, log: RatingLog, user_id: int, horizon: int = 40, seed: int = 0) -> EpisodeTrace:
    """Replays one episode of :attr:`user_id` under :attr:`policy` and records the served items."""
    generator = episode_generator(seed, user_id)
    state = env_reset(log, user_id, horizon)
    steps = []
    done = False
    while not done:
        item = policy(state, generator)
        rating, _, state, done = env_step(log, state, item)
        steps.append((item, rating))
    return EpisodeTrace.from_steps(user_id, steps)


def evaluate(
    policy: PolicyLike,
    log: RatingLog,
    users: Iterable[int],
    horizon: int = 40,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    catalog: Optional[TopicCatalog] = None,
    alpha: float = 0.5,
    seed: int = 0,
) -> Evaluation:
    """
    Runs one episode of :attr:`horizon` steps for every user and aggregates the cumulative metrics.

    Episodes are spread over :func:`icftorch.settings.num_eval_workers` threads. Each user draws from its own
    generator seeded by ``(seed, user)``, so results do not depend on the number of workers.

    :raises ValueError: if :attr:`users` is empty.
    """
    users = sorted(set(int(u) for u in users))
    if not users:
        raise ValueError("no users to evaluate")
    workers = settings.num_eval_workers.value()

    def run(user_id: int) -> EpisodeTrace:
        return rollout(policy, log, user_id, horizon, seed)

    with torch.no_grad():
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                traces = list(pool.map(run, users))
        else:
            traces = [run(u) for u in users]

    threshold = settings.satisfaction_threshold.value()
    counts = log.satisfied_counts(threshold, users)
    length = max(horizon, max(cutoffs))
    curves = metric_curves(traces, counts, length, catalog, alpha)
    table = curves[curves["T"].isin(cutoffs)].reset_index(drop=True)
    name = getattr(policy, "name", type(policy).__name__)
    _logger.info(
        f"Evaluated {name} on {len(users)} users: "
        + ", ".join(f"precision@{int(t)}={p:.4f}" for t, p in zip(table["T"], table["precision"]))
    )
    return Evaluation(traces, curves, table)
