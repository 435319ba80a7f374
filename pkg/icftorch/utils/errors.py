#!/usr/bin/env python3

from typing import Optional

from linear_operator.utils.errors import NanError, NotPSDError


class RatingParseError(ValueError):
    """
    Raised when a line of a rating log does not match its declared format.

    :param message: What was wrong with the line.
    :param line_number: 1-based line number in the source stream.
    """

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ProtocolError(RuntimeError):
    """Raised when the interactive environment is driven against its protocol (e.g. a repeated recommendation)."""

    pass


class StaleCacheError(RuntimeError):
    """Raised when a forward cache does not belong to the parameters it is differentiated against."""

    pass


class CheckpointError(RuntimeError):
    pass


class ConfigError(ValueError):
    pass


__all__ = [
    "CheckpointError",
    "ConfigError",
    "NanError",
    "NotPSDError",
    "ProtocolError",
    "RatingParseError",
    "StaleCacheError",
]
