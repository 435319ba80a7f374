#!/usr/bin/env python3

from .environment import env_reset, env_step, EnvState, InteractiveEnvironment, StepResult
from .ratings import FORMATS, parse_ratings, RatingLog, RatingRecord, serialize_ratings
from .splits import split_users, UserSplit
from .topics import load_movielens_items, load_topics, TopicCatalog

__all__ = [
    "EnvState",
    "FORMATS",
    "InteractiveEnvironment",
    "RatingLog",
    "RatingRecord",
    "StepResult",
    "TopicCatalog",
    "UserSplit",
    "env_reset",
    "env_step",
    "load_movielens_items",
    "load_topics",
    "parse_ratings",
    "serialize_ratings",
    "split_users",
]
