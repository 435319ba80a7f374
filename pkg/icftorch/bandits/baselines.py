#!/usr/bin/env python3

import logging
from typing import Dict, Iterable, Optional, Sequence

import torch

from ..agent.evaluation import evaluate
from ..agent.policy import Policy, select_action
from ..data.environment import EnvState
from ..data.ratings import RatingLog
from ..data.splits import UserSplit
from .pmf import fit_pmf, PmfModel
from .posterior import posterior_from_history
from .selectors import eps_greedy_select, glm_ucb_select, thompson_select

_logger = logging.getLogger(__name__)

PMF_POLICIES = ("mf_greedy", "pmf_eps", "pmf_ts", "pmf_ucb")
UCB_GRID = (0.01, 0.05, 0.1, 0.5, 1.0)


class RandomPolicy(Policy):
    name = "random"

    def select(self, state: EnvState, generator: torch.Generator = None) -> int:
        return select_action(torch.zeros(0), state.remaining, 1.0, generator)


class PopPolicy(Policy):
    """Recommends the valid item with the most training ratings (ties to the lowest id)."""

    name = "pop"

    def __init__(self, counts: Sequence[int]):
        self.counts = torch.as_tensor(counts, dtype=torch.float64)

    def select(self, state: EnvState, generator: torch.Generator = None) -> int:
        return select_action(self.counts, state.remaining, 0.0, generator)


class PmfPolicy(Policy):
    """
    Interactive PMF baselines. The user posterior is rebuilt from the episode history at every step,
    starting from the prior, and the item is chosen by the selector named by :attr:`kind`:

    * ``mf_greedy``: argmax of the posterior-mean scores,
    * ``pmf_eps``: ε-greedy over the same scores,
    * ``pmf_ts``: Thompson sampling,
    * ``pmf_ucb``: GLM-UCB with constant :attr:`ucb_constant`.
    """

    def __init__(self, model: PmfModel, kind: str = "mf_greedy", epsilon: float = 0.1, ucb_constant: float = 0.1):
        if kind not in PMF_POLICIES:
            raise ValueError(f"Unknown PMF policy {kind!r}; expected one of {PMF_POLICIES}")
        self.model = model
        self.kind = kind
        self.name = kind
        self.epsilon = epsilon
        self.ucb_constant = ucb_constant

    def select(self, state: EnvState, generator: torch.Generator = None) -> int:
        posterior = posterior_from_history(self.model, state.history.history)
        if self.kind == "pmf_ts":
            return thompson_select(posterior, self.model, state.remaining, generator)
        if self.kind == "pmf_ucb":
            return glm_ucb_select(posterior, self.model, state.remaining, self.ucb_constant, state.step)
        epsilon = self.epsilon if self.kind == "pmf_eps" else 0.0
        return eps_greedy_select(posterior, self.model, state.remaining, epsilon, generator)


def baseline_policies(log: RatingLog, split: UserSplit, model: Optional[PmfModel] = None, **pmf_kwargs) -> Dict:
    """
    The reference policies ``random``, ``pop`` (training-set popularity) and ``mf_greedy``.
    Without a :attr:`model`, PMF is fitted on the training users with :attr:`pmf_kwargs`.
    """
    if not split.train:
        raise ValueError("split has no training users")
    if model is None:
        model = fit_pmf(log, split.train, **pmf_kwargs)
    return {
        "random": RandomPolicy(),
        "pop": PopPolicy(log.item_counts(split.train)),
        "mf_greedy": PmfPolicy(model, "mf_greedy"),
    }


def tune_ucb_constant(
    model: PmfModel,
    log: RatingLog,
    users: Iterable[int],
    grid: Sequence[float] = UCB_GRID,
    horizon: int = 40,
    seed: int = 0,
) -> float:
    """Returns the GLM-UCB constant of :attr:`grid` with the best cumulative precision at :attr:`horizon`."""
    users = sorted(users)
    best_c, best_score = None, -1.0
    for c in grid:
        policy = PmfPolicy(model, "pmf_ucb", ucb_constant=c)
        score = evaluate(policy, log, users, horizon, seed=seed).precision_at(horizon)
        _logger.info(f"GLM-UCB c={c}: precision@{horizon}={score:.4f}")
        if score > best_score:
            best_c, best_score = c, score
    return best_c
