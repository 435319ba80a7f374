#!/usr/bin/env python3

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import torch
from jaxtyping import Float
from torch import Tensor

from ..functions import cholesky
from .pmf import PmfModel


@dataclass(frozen=True)
class PmfPosterior:
    r"""Gaussian belief :math:`\mathcal N(\boldsymbol \mu_u, \boldsymbol \Sigma_u)` over a user latent vector."""

    mean: Float[Tensor, "D"]
    cov: Float[Tensor, "D D"]

    @classmethod
    def prior(cls, latent_dim: int, prior_var: float = 1.0, dtype: torch.dtype = torch.float64) -> PmfPosterior:
        return cls(torch.zeros(latent_dim, dtype=dtype), prior_var * torch.eye(latent_dim, dtype=dtype))

    @property
    def latent_dim(self) -> int:
        return self.mean.size(0)


def _inverse(spd: Tensor) -> Tensor:
    inv = torch.cholesky_inverse(cholesky(spd))
    return (inv + inv.mT) / 2


def posterior_update(
    posterior: PmfPosterior, item_vector: Float[Tensor, "D"], rating: float, noise_var: float
) -> PmfPosterior:
    r"""
    Conjugate update after observing :attr:`rating` for an item with latent vector :math:`\boldsymbol\nu`,

    .. math::
        \boldsymbol \Sigma' = (\boldsymbol \Sigma^{-1} + \boldsymbol\nu \boldsymbol\nu^\top / \sigma^2)^{-1},
        \qquad
        \boldsymbol \mu' = \boldsymbol \Sigma' \left( \boldsymbol \Sigma^{-1} \boldsymbol \mu
        + \boldsymbol \nu r / \sigma^2 \right).

    :raises NotPSDError: if the current covariance is singular.
    """
    if item_vector.shape != posterior.mean.shape:
        raise ValueError(f"item vector {tuple(item_vector.shape)} does not match latent dim {posterior.latent_dim}")
    precision = _inverse(posterior.cov)
    new_cov = _inverse(precision + torch.outer(item_vector, item_vector) / noise_var)
    new_mean = new_cov @ (precision @ posterior.mean + item_vector * rating / noise_var)
    return PmfPosterior(new_mean, new_cov)


def posterior_from_history(model: PmfModel, history: Sequence[Tuple[int, int]]) -> PmfPosterior:
    """
    Posterior of a cold-start user after the observed ``(item, rating)`` pairs, starting from the prior.

    Equal to folding :func:`posterior_update` over the history (the updates commute), computed in one solve.
    """
    d = model.latent_dim
    dtype = model.item_means.dtype
    if not history:
        return PmfPosterior.prior(d, model.prior_var, dtype)
    items = torch.tensor([item for item, _ in history], dtype=torch.long)
    ratings = torch.tensor([rating for _, rating in history], dtype=dtype)
    nu = model.item_means[items]
    precision = torch.eye(d, dtype=dtype) / model.prior_var + nu.mT @ nu / model.noise_var
    cov = _inverse(precision)
    mean = cov @ (nu.mT @ ratings) / model.noise_var
    return PmfPosterior(mean, cov)
