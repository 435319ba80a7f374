#!/usr/bin/env python3

from __future__ import annotations

import copy
import logging
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd
import torch
from linear_operator.utils.errors import NanError

from ..data.environment import env_reset, env_step
from ..data.ratings import RatingLog
from ..data.splits import UserSplit
from ..metrics import DEFAULT_CUTOFFS
from ..models.checkpoint import save_checkpoint
from ..models.qnetwork import QNetwork
from ..utils.errors import ConfigError
from .evaluation import evaluate
from .policy import GreedyQPolicy, select_action
from .replay import ReplayBuffer, Transition
from .schedules import epsilon_schedule, gamma_schedule

_logger = logging.getLogger(__name__)

REWARD_MODES = ("binary", "raw")


@dataclass
class TrainConfig:
    """
    Hyperparameters of curriculum Q-learning.

    :ivar epochs: Number of epochs E.
    :ivar eta: Curriculum exponent of :func:`~icftorch.agent.gamma_schedule`.
    :ivar horizon: Episode length T.
    :ivar reward_mode: ``binary`` (reward is the satisfied flag) or ``raw`` (reward is the rating).
    :ivar episodes_per_epoch: Training episodes per epoch (default: one per training user).
    :ivar fixed_gamma: If set, replaces the curriculum by a constant discount (0 gives one-step regression).
    :ivar patience: Epochs without validation improvement before stopping (None disables early stopping).
    :ivar target_sync_interval: If positive, targets use a copy of the network refreshed every that many updates.
    :ivar validation_users: Cap on the number of validation users (lowest ids first).
    """

    epochs: int = 20
    eta: float = 0.2
    horizon: int = 40
    batch_size: int = 128
    learning_rate: float = 1e-3
    embedding_dim: int = 30
    num_blocks: int = 2
    seed: int = 0
    epsilon_start: float = 1.0
    epsilon_end: float = 0.0
    reward_mode: str = "binary"
    episodes_per_epoch: Optional[int] = None
    replay_capacity: int = 10000
    fixed_gamma: Optional[float] = None
    patience: Optional[int] = 10
    target_sync_interval: int = 0
    validation_users: Optional[int] = None

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigError(f"epochs must be at least 1, got {self.epochs}")
        if self.eta <= 0:
            raise ConfigError(f"eta must be positive, got {self.eta}")
        if self.horizon < 1:
            raise ConfigError(f"horizon must be at least 1, got {self.horizon}")
        if self.batch_size < 1 or self.replay_capacity < 1:
            raise ConfigError("batch_size and replay_capacity must be positive")
        if self.reward_mode not in REWARD_MODES:
            raise ConfigError(f"reward_mode must be one of {REWARD_MODES}, got {self.reward_mode!r}")
        for name in ("epsilon_start", "epsilon_end"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.fixed_gamma is not None and not 0.0 <= self.fixed_gamma <= 1.0:
            raise ConfigError(f"fixed_gamma must lie in [0, 1], got {self.fixed_gamma}")
        if self.episodes_per_epoch is not None and self.episodes_per_epoch < 1:
            raise ConfigError("episodes_per_epoch must be positive")

    def gamma(self, epoch: int) -> float:
        if self.fixed_gamma is not None:
            return self.fixed_gamma
        return gamma_schedule(epoch, self.epochs, self.eta)


@dataclass
class EpochRecord:
    epoch: int
    gamma: float
    epsilon: float
    loss: float
    precision: Dict[int, float] = field(default_factory=dict)
    episodes: int = 0
    updates: int = 0
    batch_size: int = 0


class TrainingLog:
    """Per-epoch training summaries, serializable as CSV."""

    columns = ("epoch", "gamma", "epsilon", "loss") + tuple(f"precision@{t}" for t in DEFAULT_CUTOFFS) + (
        "episodes",
        "updates",
        "batch_size",
    )

    def __init__(self):
        self.records: List[EpochRecord] = []
        self.best_epoch: Optional[int] = None

    def append(self, record: EpochRecord) -> None:
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for record in self.records:
            row = {k: v for k, v in asdict(record).items() if k != "precision"}
            for t in DEFAULT_CUTOFFS:
                row[f"precision@{t}"] = record.precision.get(t, float("nan"))
            rows.append(row)
        return pd.DataFrame(rows, columns=list(self.columns))

    def to_csv(self, path: Union[str, os.PathLike]) -> None:
        self.to_frame().to_csv(path, index=False, float_format="%.6g", lineterminator="\n")


def compute_target(transition: Transition, qnet: QNetwork, gamma: float) -> float:
    r"""
    Bellman target :math:`y = r + \gamma \max_{i \in \text{valid}} Q(s_{t+1}, i)`, or :math:`y = r` at the end of an
    episode. The maximum only ranges over items still valid at :math:`s_{t+1}`.

    :raises ValueError: for a non-terminal transition without valid next items.
    """
    if transition.done:
        return float(transition.reward)
    if not transition.valid_next:
        raise ValueError("non-terminal transition has no valid next item")
    if gamma == 0:
        return float(transition.reward)
    with torch.no_grad():
        q_next = qnet(transition.next_state)
    valid = torch.tensor(sorted(transition.valid_next), dtype=torch.long)
    return float(transition.reward) + gamma * float(q_next[valid].max())


def td_update(
    batch: Sequence[Transition],
    qnet: QNetwork,
    gamma: float,
    optimizer: torch.optim.Optimizer,
    target_network: Optional[QNetwork] = None,
) -> float:
    r"""
    One gradient step on the mean squared temporal-difference error

    .. math::
        \mathcal L = \frac{1}{B} \sum_{t} \left( y_t - Q_\theta(s_t, i_t) \right)^2,

    with the targets :math:`y_t` held constant. Gradients come from :meth:`QNetwork.backward` and are applied
    by :attr:`optimizer`.

    :return: The loss before the step.
    :raises NanError: if the loss is not finite.
    """
    if not batch:
        raise ValueError("empty batch")
    target_network = qnet if target_network is None else target_network
    targets = [compute_target(tr, target_network, gamma) for tr in batch]
    grads = qnet.zero_grad_like()
    loss = 0.0
    scale = 2.0 / len(batch)
    with torch.no_grad():
        for tr, y in zip(batch, targets):
            q, cache = qnet.forward(tr.state)
            error = float(q[tr.action]) - y
            loss += error * error
            for name, grad in qnet.backward(cache, tr.action, upstream=scale * error).items():
                grads[name] += grad
    loss /= len(batch)
    if not math.isfinite(loss):
        raise NanError(f"TD loss became {loss}; targets ranged over [{min(targets)}, {max(targets)}]")
    qnet.assign_grad(grads)
    optimizer.step()
    return loss


def _epoch_users(users: Sequence[int], count: int, generator: torch.Generator) -> List[int]:
    order: List[int] = []
    while len(order) < count:
        order.extend(users[i] for i in torch.randperm(len(users), generator=generator).tolist())
    return order[:count]


def _episode_length(log: RatingLog, user: int, horizon: int) -> int:
    return min(horizon, len(log.user_ratings(user)))


def _validation_users(split: UserSplit, cap: Optional[int]) -> List[int]:
    users = sorted(split.valid)
    return users if cap is None else users[:cap]


def train(
    log: RatingLog,
    split: UserSplit,
    config: TrainConfig,
    checkpoint_path: Optional[Union[str, os.PathLike]] = None,
) -> Tuple[QNetwork, TrainingLog]:
    """
    Curriculum Q-learning of a :class:`~icftorch.models.QNetwork` on the training users of :attr:`split`.

    Every epoch sets :math:`\\gamma_e` from the curriculum, replays ``episodes_per_epoch`` training users with an
    ε-greedy behavior policy, and takes one TD step per environment step once the replay buffer holds a batch.
    The exploration rate decays linearly from ``epsilon_start`` at the first environment step of training to
    ``epsilon_end`` at the last one.
    After each epoch the greedy policy is evaluated on the validation users; the parameters with the best
    precision@40 are restored at the end (and written to :attr:`checkpoint_path` when given).

    :raises ValueError: if the split has no training user.
    """
    train_users = sorted(split.train)
    if not train_users:
        raise ValueError("split has no training users")
    generator = torch.Generator().manual_seed(config.seed)
    qnet = QNetwork(log.n_items, config.embedding_dim, config.num_blocks, log.max_rating, seed=config.seed)
    optimizer = torch.optim.Adam(qnet.parameters(), lr=config.learning_rate, betas=(0.9, 0.999), eps=1e-8)
    target = qnet.clone() if config.target_sync_interval > 0 else None
    replay = ReplayBuffer(config.replay_capacity)
    valid_users = _validation_users(split, config.validation_users)

    episodes = config.episodes_per_epoch or len(train_users)
    schedule = [_epoch_users(train_users, episodes, generator) for _ in range(config.epochs)]
    # episodes end early once a user runs out of rated items
    total_steps = sum(_episode_length(log, user, config.horizon) for users in schedule for user in users)
    decay_steps = max(total_steps - 1, 1)
    history = TrainingLog()
    best_score, best_state, stale = -math.inf, None, 0
    env_steps = updates = 0

    _logger.info(
        f"Training on {len(train_users)} users for {config.epochs} epochs "
        f"({episodes} episodes/epoch, batch {config.batch_size}, {log.n_items} items)"
    )
    for epoch, epoch_users in enumerate(schedule, start=1):
        gamma = config.gamma(epoch)
        losses = []
        epsilon = config.epsilon_start
        for user in epoch_users:
            state = env_reset(log, user, config.horizon)
            done = False
            while not done:
                epsilon = epsilon_schedule(
                    min(env_steps, decay_steps), decay_steps, config.epsilon_start, config.epsilon_end
                )
                with torch.no_grad():
                    q = qnet(state.history)
                item = select_action(q, state.remaining, epsilon, generator)
                rating, satisfied, next_state, done = env_step(log, state, item)
                reward = satisfied if config.reward_mode == "binary" else rating
                replay.push(
                    Transition(state.history, item, float(reward), next_state.history, done, next_state.remaining)
                )
                state = next_state
                env_steps += 1
                if len(replay) >= config.batch_size:
                    batch = replay.sample(config.batch_size, generator)
                    losses.append(td_update(batch, qnet, gamma, optimizer, target))
                    updates += 1
                    _logger.debug(f"epoch {epoch} update {updates}: loss {losses[-1]:.6g}")
                    if target is not None and updates % config.target_sync_interval == 0:
                        target.copy_from(qnet)

        record = EpochRecord(
            epoch=epoch,
            gamma=gamma,
            epsilon=epsilon,
            loss=sum(losses) / len(losses) if losses else float("nan"),
            episodes=episodes,
            updates=len(losses),
            batch_size=config.batch_size,
        )
        if valid_users:
            result = evaluate(GreedyQPolicy(qnet), log, valid_users, config.horizon, seed=config.seed)
            record.precision = {int(t): float(p) for t, p in zip(result.table["T"], result.table["precision"])}
        history.append(record)
        _logger.info(
            f"epoch {epoch}/{config.epochs}: gamma={gamma:.4f} epsilon={epsilon:.4f} loss={record.loss:.6g}"
            + (f" valid precision@40={record.precision[40]:.4f}" if record.precision else "")
        )

        if not valid_users:
            continue
        score = record.precision[40]
        if score > best_score:
            best_score, best_state, stale = score, copy.deepcopy(qnet.state_dict()), 0
            history.best_epoch = epoch
            if checkpoint_path is not None:
                save_checkpoint(qnet, checkpoint_path, epoch=epoch, precision=score)
        else:
            stale += 1
            if config.patience is not None and stale >= config.patience:
                _logger.info(f"Stopping early after epoch {epoch}; best epoch {history.best_epoch}")
                break

    if best_state is not None:
        qnet.load_state_dict(best_state)
    elif checkpoint_path is not None:
        save_checkpoint(qnet, checkpoint_path, epoch=len(history))
    return qnet, history
