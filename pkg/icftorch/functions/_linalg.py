#!/usr/bin/env python3

from typing import Optional

import torch
from jaxtyping import Float
from linear_operator.utils.errors import NotPSDError
from torch import Tensor

_SYMMETRY_TOL = 1e-10


def cholesky(s: Float[Tensor, "D D"]) -> Float[Tensor, "D D"]:
    r"""
    Computes the lower Cholesky factor :math:`\mathbf L` with :math:`\mathbf L \mathbf L^\top = \mathbf S`.

    Unlike :func:`linear_operator.utils.cholesky.psd_safe_cholesky`, no jitter is added: a matrix that is
    not symmetric positive definite is an error.

    :param s: Symmetric positive definite matrix.
    :raises NotPSDError: if :attr:`s` is asymmetric or a pivot is nonpositive.
    """
    if s.dim() != 2 or s.size(0) != s.size(1):
        raise ValueError(f"cholesky expects a square matrix, got shape {tuple(s.shape)}")
    if not torch.isfinite(s).all():
        raise NotPSDError("cholesky received a matrix with non-finite entries")
    if s.numel() and (s - s.mT).abs().max().item() > _SYMMETRY_TOL:
        raise NotPSDError(f"Matrix is not symmetric within {_SYMMETRY_TOL}")
    L, info = torch.linalg.cholesky_ex(s)
    if int(info):
        raise NotPSDError(f"Matrix not positive definite: nonpositive pivot at column {int(info) - 1}")
    return L


def sample_gaussian(
    mean: Float[Tensor, "D"], cov: Float[Tensor, "D D"], generator: Optional[torch.Generator] = None
) -> Float[Tensor, "D"]:
    r"""
    Draws :math:`\boldsymbol \mu + \mathbf L \boldsymbol \xi` with :math:`\boldsymbol \xi \sim \mathcal N(0, \mathbf I)`
    and :math:`\mathbf L` the Cholesky factor of :attr:`cov`.

    The draw is a deterministic function of the generator state.
    """
    if mean.dim() != 1 or cov.shape != (mean.size(0), mean.size(0)):
        raise ValueError(f"mean {tuple(mean.shape)} and covariance {tuple(cov.shape)} do not agree")
    L = cholesky(cov)
    xi = torch.randn(mean.size(0), generator=generator, dtype=mean.dtype, device=mean.device)
    return mean + L @ xi
