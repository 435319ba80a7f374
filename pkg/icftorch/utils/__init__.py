#!/usr/bin/env python3

from . import errors, warnings

__all__ = [
    "errors",
    "warnings",
]
