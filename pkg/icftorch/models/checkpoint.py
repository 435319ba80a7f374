#!/usr/bin/env python3

import logging
import os
import warnings
from typing import Dict, Type, Union

import torch

from ..module import Module
from ..utils.errors import CheckpointError
from ..utils.warnings import OldVersionWarning

_logger = logging.getLogger(__name__)

FORMAT_NAME = "icftorch-checkpoint"
FORMAT_VERSION = 2

PathLike = Union[str, os.PathLike]


def save_checkpoint(module: Module, path: PathLike, **metadata) -> None:
    """
    Writes every parameter and buffer of :attr:`module` with its name and shape, together with the
    hyperparameters needed to rebuild the module. Extra keyword arguments are stored as metadata.
    """
    payload = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "class": type(module).__name__,
        "hyperparameters": module.hyperparameters(),
        "tensors": {name: tensor.detach().cpu().clone() for name, tensor in module.named_tensors()},
        "metadata": metadata,
    }
    torch.save(payload, path)
    _logger.debug(f"Saved {len(payload['tensors'])} tensors of {payload['class']} to {path}")


def _read_payload(path: PathLike) -> Dict:
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as e:
        raise CheckpointError(f"Could not read checkpoint {path}: {e}") from e
    if not isinstance(payload, dict) or payload.get("format") != FORMAT_NAME:
        raise CheckpointError(f"{path} is not an icftorch checkpoint")
    version = int(payload.get("version", 0))
    if version > FORMAT_VERSION:
        raise CheckpointError(f"{path} has format version {version}, newer than supported {FORMAT_VERSION}")
    if version < FORMAT_VERSION:
        warnings.warn(
            f"{path} was written with checkpoint format version {version} (current {FORMAT_VERSION}).",
            OldVersionWarning,
        )
    return payload


def load_state(module: Module, path: PathLike) -> Dict:
    """
    Loads the tensors of a checkpoint into an existing :attr:`module`.

    :return: The checkpoint metadata.
    :raises CheckpointError: if a tensor is missing, unexpected, or has a different shape.
    """
    payload = _read_payload(path)
    tensors = payload["tensors"]
    own = dict(module.named_tensors())
    missing = sorted(set(own) - set(tensors))
    unexpected = sorted(set(tensors) - set(own))
    if missing or unexpected:
        raise CheckpointError(f"Checkpoint tensors do not match: missing {missing}, unexpected {unexpected}")
    with torch.no_grad():
        for name, target in own.items():
            source = tensors[name]
            if source.shape != target.shape:
                raise CheckpointError(
                    f"Shape mismatch for {name}: checkpoint {tuple(source.shape)} vs module {tuple(target.shape)}"
                )
            target.copy_(source.to(dtype=target.dtype, device=target.device))
    return payload.get("metadata", {})


def load_checkpoint(path: PathLike, cls: Type[Module] = None) -> Module:
    """
    Rebuilds a module from its stored hyperparameters and loads its tensors.

    :param cls: Class to instantiate. Defaults to the class recorded in the checkpoint, looked up in
        :mod:`icftorch.models` and :mod:`icftorch.bandits`.
    """
    payload = _read_payload(path)
    if cls is None:
        cls = _registered_class(payload.get("class"))
    elif cls.__name__ != payload.get("class"):
        raise CheckpointError(f"Checkpoint holds a {payload.get('class')}, not a {cls.__name__}")
    try:
        module = cls(**payload["hyperparameters"])
    except TypeError as e:
        raise CheckpointError(f"Cannot rebuild {cls.__name__} from {payload['hyperparameters']}: {e}") from e
    load_state(module, path)
    return module


def _registered_class(name: str) -> Type[Module]:
    from .. import bandits, models

    for package in (models, bandits):
        cls = getattr(package, str(name), None)
        if isinstance(cls, type) and issubclass(cls, Module):
            return cls
    raise CheckpointError(f"Unknown module class {name!r} in checkpoint")
