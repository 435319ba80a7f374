#!/usr/bin/env python3

from .evaluation import episode_generator, evaluate, Evaluation, rollout
from .learner import compute_target, EpochRecord, td_update, train, TrainConfig, TrainingLog
from .policy import GreedyQPolicy, Policy, select_action
from .replay import ReplayBuffer, Transition
from .schedules import epsilon_schedule, gamma_schedule

__all__ = [
    "EpochRecord",
    "Evaluation",
    "GreedyQPolicy",
    "Policy",
    "ReplayBuffer",
    "TrainConfig",
    "TrainingLog",
    "Transition",
    "compute_target",
    "episode_generator",
    "epsilon_schedule",
    "evaluate",
    "gamma_schedule",
    "rollout",
    "select_action",
    "td_update",
    "train",
]
