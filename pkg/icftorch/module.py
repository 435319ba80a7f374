#!/usr/bin/env python3

from typing import Dict, Iterator, Tuple

import torch
from gpytorch.module import Module as GModule
from torch import Tensor


class Module(GModule):
    """
    Base class of every learnable container in icftorch.

    Parameters and buffers are tensors of :func:`icftorch.settings.dtype`.
    Subclasses list the hyperparameters needed to rebuild them in :attr:`hyperparameter_names`,
    which the checkpoint functions store next to the tensors.
    """

    hyperparameter_names: Tuple[str, ...] = ()

    def named_tensors(self) -> Iterator[Tuple[str, Tensor]]:
        """Yields every parameter and buffer, in registration order."""
        for name, param in self.named_parameters():
            yield name, param
        for name, buffer in self.named_buffers():
            yield name, buffer

    def hyperparameters(self) -> Dict[str, object]:
        return {name: getattr(self, name) for name in self.hyperparameter_names}

    def zero_grad_like(self) -> Dict[str, Tensor]:
        """Returns a dictionary of zero tensors with the shapes of the parameters."""
        return {name: torch.zeros_like(param) for name, param in self.named_parameters()}

    def assign_grad(self, grads: Dict[str, Tensor]) -> None:
        """Writes externally computed gradients into ``Parameter.grad`` so a torch optimizer can step."""
        for name, param in self.named_parameters():
            grad = grads.get(name)
            if grad is None:
                param.grad = None
            else:
                param.grad = grad.detach().clone()
