#!/usr/bin/env python3

from abc import ABC, abstractmethod
from typing import Collection

import torch
from jaxtyping import Float
from torch import Tensor

from ..data.environment import EnvState
from ..models.qnetwork import QNetwork


def select_action(
    q: Float[Tensor, "I"], valid: Collection[int], epsilon: float, generator: torch.Generator = None
) -> int:
    """
    ε-greedy choice among :attr:`valid` items.

    With probability :math:`1 - \\epsilon` the valid item with the largest :attr:`q` is returned (ties go to the
    lowest item id), otherwise a uniformly drawn valid item. One uniform number is always drawn from
    :attr:`generator`, so the random stream does not depend on :attr:`epsilon`.

    :raises ValueError: if :attr:`valid` is empty or :attr:`epsilon` lies outside [0, 1].
    """
    if not valid:
        raise ValueError("no valid item to select")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    candidates = torch.tensor(sorted(valid), dtype=torch.long)
    if torch.rand((), generator=generator, dtype=torch.float64) < epsilon:
        pick = torch.randint(len(candidates), (), generator=generator)
        return int(candidates[pick])
    return int(candidates[torch.argmax(q.detach().cpu()[candidates])])


class Policy(ABC):
    """
    A recommendation rule: given the state of an episode, pick one of ``state.remaining``.
    Policies must not keep per-episode state, so one instance can serve many users concurrently.
    """

    name: str = "policy"

    @abstractmethod
    def select(self, state: EnvState, generator: torch.Generator = None) -> int:
        raise NotImplementedError

    def __call__(self, state: EnvState, generator: torch.Generator = None) -> int:
        return self.select(state, generator)


class GreedyQPolicy(Policy):
    """Recommends the valid item with the largest Q-value (ε = 0 unless given)."""

    name = "nicf"

    def __init__(self, qnet: QNetwork, epsilon: float = 0.0):
        self.qnet = qnet
        self.epsilon = epsilon

    def select(self, state: EnvState, generator: torch.Generator = None) -> int:
        with torch.no_grad():
            q = self.qnet(state.history)
        return select_action(q, state.remaining, self.epsilon, generator)
