#!/usr/bin/env python3

from typing import Union

import torch
from scipy.special import expit
from torch import Tensor


def sigmoid(x: Union[float, Tensor]) -> Union[float, Tensor]:
    r"""
    The logistic function :math:`\rho(x) = 1 / (1 + e^{-x})`.

    Saturates to exactly 1.0 (0.0) for large positive (negative) inputs without overflow.
    Tensors are handled by :func:`torch.sigmoid`, scalars by :func:`scipy.special.expit`.
    """
    if torch.is_tensor(x):
        return torch.sigmoid(x)
    return float(expit(x))
