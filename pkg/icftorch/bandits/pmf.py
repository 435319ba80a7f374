#!/usr/bin/env python3

from __future__ import annotations

import logging
from typing import Iterable, List, Optional, Tuple

import torch
from jaxtyping import Float, Int
from linear_operator.utils.errors import NotPSDError
from torch import Tensor

from .. import settings
from ..data.ratings import RatingLog
from ..module import Module

_logger = logging.getLogger(__name__)

_CHUNK = 20000


class PmfModel(Module):
    r"""
    Item side of probabilistic matrix factorization,

    .. math::
        r_{u,i} \sim \mathcal N(\mathbf p_u^\top \mathbf q_i, \sigma^2), \qquad
        \mathbf p_u \sim \mathcal N(\mathbf 0, \sigma_u^2 \mathbf I), \qquad
        \mathbf q_i \sim \mathcal N(\boldsymbol \nu_i, \boldsymbol \Psi_i).

    The item covariances :math:`\boldsymbol \Psi_i` are diagonal and stored as variances.

    :param num_items: Number of items.
    :param latent_dim: Latent dimension :math:`d`.
    :param noise_var: Rating noise :math:`\sigma^2`.
    :param prior_var: User prior variance :math:`\sigma_u^2`.
    :param seed: Seed of the initial item means.
    """

    hyperparameter_names = ("num_items", "latent_dim", "noise_var", "prior_var")

    def __init__(
        self, num_items: int, latent_dim: int, noise_var: float = 0.25, prior_var: float = 1.0, seed: int = 0
    ):
        super().__init__()
        if latent_dim < 1:
            raise ValueError(f"latent_dim must be at least 1, got {latent_dim}")
        if noise_var <= 0 or prior_var <= 0:
            raise ValueError("noise_var and prior_var must be positive")
        self.num_items = num_items
        self.latent_dim = latent_dim
        self.noise_var = float(noise_var)
        self.prior_var = float(prior_var)
        self.fit_losses: List[float] = []
        dtype = settings.dtype.value()
        generator = torch.Generator().manual_seed(seed)
        self.register_buffer("item_means", 0.1 * torch.randn(num_items, latent_dim, generator=generator, dtype=dtype))
        self.register_buffer("item_vars", torch.full((num_items, latent_dim), self.prior_var, dtype=dtype))

    def item_cov(self, item: int) -> Float[Tensor, "D D"]:
        return torch.diag(self.item_vars[item])

    def scores(self, user_vector: Float[Tensor, "D"]) -> Float[Tensor, "I"]:
        return self.item_means @ user_vector


def _gram(
    rows: Int[Tensor, "N"], factors: Float[Tensor, "N D"], targets: Float[Tensor, "N"], n_rows: int
) -> Tuple[Tensor, Tensor]:
    """Per-row sums of :math:`\\mathbf x \\mathbf x^\\top` and :math:`\\mathbf x r`, accumulated in chunks."""
    d = factors.size(-1)
    gram = factors.new_zeros(n_rows, d, d)
    rhs = factors.new_zeros(n_rows, d)
    for start in range(0, rows.numel(), _CHUNK):
        sl = slice(start, start + _CHUNK)
        x = factors[sl]
        gram.index_add_(0, rows[sl], x.unsqueeze(-1) * x.unsqueeze(-2))
        rhs.index_add_(0, rows[sl], x * targets[sl].unsqueeze(-1))
    return gram, rhs


def _regularized_solve(
    gram: Tensor, rhs: Tensor, noise_var: float, prior_var: float
) -> Tuple[Float[Tensor, "N D"], Float[Tensor, "N D D"]]:
    """
    MAP factors and posterior precision Cholesky factors of every row of the regression
    :math:`(\\mathbf G / \\sigma^2 + \\mathbf I / \\sigma_p^2) \\mathbf x = \\mathbf b / \\sigma^2`.
    """
    d = gram.size(-1)
    precision = gram / noise_var + torch.eye(d, dtype=gram.dtype) / prior_var
    L, info = torch.linalg.cholesky_ex(precision)
    if bool((info > 0).any()):
        raise NotPSDError(f"PMF normal equations not positive definite for {int((info > 0).sum())} rows")
    solution = torch.cholesky_solve((rhs / noise_var).unsqueeze(-1), L).squeeze(-1)
    return solution, L


def pmf_loss(users, items, ratings, user_factors, item_factors, noise_var, prior_var, item_prior_var) -> float:
    """Negative log posterior of the PMF model, up to constants."""
    residual = ratings - (user_factors[users] * item_factors[items]).sum(-1)
    return float(
        residual.square().sum() / (2 * noise_var)
        + user_factors.square().sum() / (2 * prior_var)
        + item_factors.square().sum() / (2 * item_prior_var)
    )


def fit_pmf_arrays(
    users: Int[Tensor, "N"],
    items: Int[Tensor, "N"],
    ratings: Float[Tensor, "N"],
    n_users: int,
    n_items: int,
    latent_dim: int = 10,
    noise_var: float = 0.25,
    prior_var: float = 1.0,
    item_prior_var: Optional[float] = None,
    iters: int = 20,
    seed: int = 0,
) -> PmfModel:
    """
    Alternating regularized least squares on ``(user, item, rating)`` triples.

    Each half-step solves the MAP regression of one factor matrix with the other fixed, so the loss recorded in
    ``model.fit_losses`` does not increase. The item variances are the diagonal of the posterior covariance of the
    final item regression.
    """
    item_prior_var = prior_var if item_prior_var is None else item_prior_var
    model = PmfModel(n_items, latent_dim, noise_var, prior_var, seed=seed)
    dtype = model.item_means.dtype
    users = torch.as_tensor(users, dtype=torch.long)
    items = torch.as_tensor(items, dtype=torch.long)
    ratings = torch.as_tensor(ratings, dtype=dtype)
    if not ratings.numel():
        raise ValueError("cannot fit PMF on an empty set of ratings")

    item_factors = model.item_means.clone()
    user_factors = torch.zeros(n_users, latent_dim, dtype=dtype)
    L_items = None
    for it in range(iters):
        gram, rhs = _gram(users, item_factors[items], ratings, n_users)
        user_factors, _ = _regularized_solve(gram, rhs, noise_var, prior_var)
        gram, rhs = _gram(items, user_factors[users], ratings, n_items)
        item_factors, L_items = _regularized_solve(gram, rhs, noise_var, item_prior_var)
        loss = pmf_loss(users, items, ratings, user_factors, item_factors, noise_var, prior_var, item_prior_var)
        model.fit_losses.append(loss)
        _logger.debug(f"PMF iteration {it + 1}/{iters}: loss {loss:.6g}")

    with torch.no_grad():
        model.item_means.copy_(item_factors)
        if L_items is not None:
            model.item_vars.copy_(torch.cholesky_inverse(L_items).diagonal(dim1=-2, dim2=-1))
    if model.fit_losses:
        _logger.info(f"Fitted PMF (d={latent_dim}) on {ratings.numel()} ratings: final loss {model.fit_losses[-1]:.6g}")
    return model


def fit_pmf(
    log: RatingLog,
    users: Optional[Iterable[int]] = None,
    latent_dim: int = 10,
    noise_var: float = 0.25,
    prior_var: float = 1.0,
    iters: int = 20,
    seed: int = 0,
) -> PmfModel:
    """Fits :class:`PmfModel` on the ratings of :attr:`users` (all users by default) in :attr:`log`."""
    if latent_dim < 1:
        raise ValueError(f"latent_dim must be at least 1, got {latent_dim}")
    frame = log.frame if users is None else log.restrict(users)
    if frame.empty:
        raise ValueError("no training ratings to fit PMF on")
    return fit_pmf_arrays(
        torch.as_tensor(frame["user"].to_numpy()),
        torch.as_tensor(frame["item"].to_numpy()),
        torch.as_tensor(frame["rating"].to_numpy(), dtype=settings.dtype.value()),
        log.n_users,
        log.n_items,
        latent_dim=latent_dim,
        noise_var=noise_var,
        prior_var=prior_var,
        iters=iters,
        seed=seed,
    )
