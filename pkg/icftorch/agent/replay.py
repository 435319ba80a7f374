#!/usr/bin/env python3

from collections import deque
from typing import FrozenSet, List, NamedTuple

import torch

from ..models.support_state import SupportState


class Transition(NamedTuple):
    """One experience :math:`(s_t, i_t, r_t, s_{t+1})` with the terminal flag and the items valid at :math:`s_{t+1}`."""

    state: SupportState
    action: int
    reward: float
    next_state: SupportState
    done: bool
    valid_next: FrozenSet[int]


class ReplayBuffer:
    """
    Fixed-capacity FIFO store of transitions. When full, pushing evicts the oldest transition.

    :param capacity: Maximum number of stored transitions.
    """

    def __init__(self, capacity: int = 10000):
        if capacity < 1:
            raise ValueError(f"capacity must be positive, got {capacity}")
        self.capacity = capacity
        self._storage = deque(maxlen=capacity)

    def push(self, transition: Transition) -> None:
        self._storage.append(transition)

    def sample(self, batch_size: int, generator: torch.Generator = None) -> List[Transition]:
        """Draws :attr:`batch_size` distinct transitions uniformly (all of them if fewer are stored)."""
        if not self._storage:
            raise ValueError("cannot sample from an empty replay buffer")
        idx = torch.randperm(len(self._storage), generator=generator)[:batch_size]
        return [self._storage[i] for i in idx.tolist()]

    def __len__(self) -> int:
        return len(self._storage)

    def __iter__(self):
        return iter(self._storage)
