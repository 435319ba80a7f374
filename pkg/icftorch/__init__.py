#!/usr/bin/env python3

from . import agent, bandits, data, functions, metrics, models, settings, utils
from .agent import evaluate, train, TrainConfig
from .data import InteractiveEnvironment, parse_ratings, RatingLog, split_users
from .models import QNetwork, SupportState
from .module import Module

# Read version number as written by setuptools_scm
try:
    from icftorch.version import version as __version__
except Exception:  # pragma: no cover
    __version__ = "Unknown"  # pragma: no cover


__all__ = [
    # Submodules
    "agent",
    "bandits",
    "data",
    "functions",
    "metrics",
    "models",
    "utils",
    # Classes
    "InteractiveEnvironment",
    "Module",
    "QNetwork",
    "RatingLog",
    "SupportState",
    "TrainConfig",
    # Functions
    "evaluate",
    "parse_ratings",
    "split_users",
    "train",
    # Context managers
    "settings",
    # Other
    "__version__",
]
