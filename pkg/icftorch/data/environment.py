#!/usr/bin/env python3

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, NamedTuple

from .. import settings
from ..models.support_state import SupportState
from ..utils.errors import ProtocolError
from .ratings import RatingLog


@dataclass(frozen=True)
class EnvState:
    """
    State of one offline episode.

    :ivar user_id: The replayed (dense) user.
    :ivar step: Index t of the next recommendation, starting at 1.
    :ivar history: Observed (item, rating) pairs, per rating channel.
    :ivar remaining: Logged items of the user not yet recommended in this episode.
    :ivar horizon: Episode length T.
    """

    user_id: int
    step: int
    history: SupportState
    remaining: FrozenSet[int]
    horizon: int = 40

    @property
    def done(self) -> bool:
        return self.step > self.horizon or not self.remaining


class StepResult(NamedTuple):
    rating: int
    satisfied: int
    next: EnvState
    done: bool


def env_reset(log: RatingLog, user_id: int, horizon: int = 40) -> EnvState:
    """
    Starts an episode for :attr:`user_id`. The candidate set is every item the user rated in the log.

    :raises KeyError: if the user is unknown.
    :raises ValueError: if the user has no ratings or the horizon is not positive.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if not 0 <= user_id < log.n_users:
        raise KeyError(f"Unknown user {user_id}")
    rated = log.user_ratings(user_id)
    if not rated:
        raise ValueError(f"User {user_id} has no ratings to replay")
    return EnvState(
        user_id=user_id,
        step=1,
        history=SupportState.empty(log.max_rating),
        remaining=frozenset(rated),
        horizon=horizon,
    )


def env_step(log: RatingLog, state: EnvState, item_id: int) -> StepResult:
    """
    Recommends :attr:`item_id` to the replayed user and returns the logged feedback.

    The item moves from ``remaining`` to the rating channel of the history. The episode ends after
    ``horizon`` steps or when the user has no unrecommended logged items left.

    :raises ProtocolError: if the item is not in ``state.remaining`` or the episode is over.
    """
    if state.done:
        raise ProtocolError(f"Episode of user {state.user_id} is already over at step {state.step}")
    if item_id not in state.remaining:
        raise ProtocolError(
            f"Item {item_id} is not a candidate for user {state.user_id} (unrated or already recommended)"
        )
    rating = log.user_ratings(state.user_id)[item_id]
    satisfied = int(rating >= settings.satisfaction_threshold.value())
    remaining = state.remaining - {item_id}
    done = state.step == state.horizon or not remaining
    next_state = EnvState(
        user_id=state.user_id,
        step=state.step + 1,
        history=state.history.append(item_id, rating),
        remaining=remaining,
        horizon=state.horizon,
    )
    return StepResult(rating, satisfied, next_state, done)


class InteractiveEnvironment:
    """
    Convenience wrapper binding :func:`env_reset` and :func:`env_step` to one log and horizon.

    Example:
        >>> env = InteractiveEnvironment(log, horizon=40)
        >>> state = env.reset(user_id)
        >>> rating, satisfied, state, done = env.step(state, item_id)
    """

    def __init__(self, log: RatingLog, horizon: int = 40):
        self.log = log
        self.horizon = horizon

    def reset(self, user_id: int) -> EnvState:
        return env_reset(self.log, user_id, self.horizon)

    def step(self, state: EnvState, item_id: int) -> StepResult:
        return env_step(self.log, state, item_id)
