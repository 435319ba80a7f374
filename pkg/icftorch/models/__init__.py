#!/usr/bin/env python3

from . import blocks
from .checkpoint import load_checkpoint, load_state, save_checkpoint
from .qnetwork import ForwardCache, QNetwork
from .support_state import SupportState

__all__ = [
    "ForwardCache",
    "QNetwork",
    "SupportState",
    "blocks",
    "load_checkpoint",
    "load_state",
    "save_checkpoint",
]
