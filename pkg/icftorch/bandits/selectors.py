#!/usr/bin/env python3

import math
from typing import Collection

import torch

from ..agent.policy import select_action
from ..functions import sample_gaussian, sigmoid
from .pmf import PmfModel
from .posterior import PmfPosterior


def _candidates(valid: Collection[int]) -> torch.Tensor:
    if not valid:
        raise ValueError("no valid item to select")
    return torch.tensor(sorted(valid), dtype=torch.long)


def thompson_select(
    posterior: PmfPosterior, model: PmfModel, valid: Collection[int], generator: torch.Generator = None
) -> int:
    r"""
    Thompson sampling: draws :math:`\tilde{\mathbf p} \sim \mathcal N(\boldsymbol\mu_u, \boldsymbol\Sigma_u)` and
    :math:`\tilde{\mathbf q}_i \sim \mathcal N(\boldsymbol\nu_i, \boldsymbol\Psi_i)` for every valid item, then
    returns the valid item with the largest :math:`\tilde{\mathbf p}^\top \tilde{\mathbf q}_i` (ties to the lowest id).
    """
    candidates = _candidates(valid)
    user = sample_gaussian(posterior.mean, posterior.cov, generator)
    means = model.item_means[candidates]
    noise = torch.randn(means.shape, generator=generator, dtype=means.dtype)
    items = means + model.item_vars[candidates].sqrt() * noise
    return int(candidates[torch.argmax(items @ user)])


def glm_ucb_select(posterior: PmfPosterior, model: PmfModel, valid: Collection[int], c: float, t: int) -> int:
    r"""
    GLM-UCB: returns the valid item maximizing

    .. math::
        \rho(\boldsymbol\mu_u^\top \boldsymbol\nu_i)
        + c \sqrt{\log t} \, \sqrt{\boldsymbol\nu_i^\top \boldsymbol\Sigma_u \boldsymbol\nu_i},

    with :math:`\rho` the sigmoid (ties to the lowest id). At :math:`t = 1` the bonus vanishes.
    """
    if t < 1:
        raise ValueError(f"step t must be at least 1, got {t}")
    if c < 0:
        raise ValueError(f"exploration constant must be nonnegative, got {c}")
    candidates = _candidates(valid)
    nu = model.item_means[candidates]
    mean = sigmoid(nu @ posterior.mean)
    width = ((nu @ posterior.cov) * nu).sum(-1).clamp_min(0.0).sqrt()
    return int(candidates[torch.argmax(mean + c * math.sqrt(math.log(t)) * width)])


def eps_greedy_select(
    posterior: PmfPosterior, model: PmfModel, valid: Collection[int], epsilon: float, generator: torch.Generator = None
) -> int:
    """ε-greedy over the posterior-mean scores :math:`\\boldsymbol\\mu_u^\\top \\boldsymbol\\nu_i`."""
    return select_action(model.scores(posterior.mean), valid, epsilon, generator)
