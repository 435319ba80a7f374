#!/usr/bin/env python3

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Tuple


@dataclass(frozen=True)
class SupportState:
    """
    The interaction history :math:`s_t = \\{i_1, r_{u,i_1}, \\dots, i_{t-1}, r_{u,i_{t-1}}\\}` of one episode,
    kept both in recommendation order and split into one channel per rating score.

    ``channels[z - 1]`` lists the items rated ``z`` in the order they were recommended.
    States are immutable and hashable; :meth:`append` returns a new state.
    """

    max_rating: int
    history: Tuple[Tuple[int, int], ...] = ()
    channels: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        if not self.channels:
            channels = [[] for _ in range(self.max_rating)]
            for item, rating in self.history:
                channels[rating - 1].append(item)
            object.__setattr__(self, "channels", tuple(tuple(c) for c in channels))

    @classmethod
    def empty(cls, max_rating: int = 5) -> SupportState:
        return cls(max_rating=max_rating)

    def append(self, item: int, rating: int) -> SupportState:
        if not 1 <= rating <= self.max_rating:
            raise ValueError(f"rating {rating} outside [1, {self.max_rating}]")
        channels = list(self.channels)
        channels[rating - 1] = channels[rating - 1] + (item,)
        return SupportState(self.max_rating, self.history + ((item, rating),), tuple(channels))

    def channel(self, z: int) -> Tuple[int, ...]:
        """Items rated ``z`` (1-based score)."""
        return self.channels[z - 1]

    @property
    def items(self) -> FrozenSet[int]:
        return frozenset(item for item, _ in self.history)

    def __len__(self) -> int:
        return len(self.history)
