#!/usr/bin/env python3

from typing import Optional

import torch
from jaxtyping import Bool, Float
from torch import Tensor


def softmax_rows(
    m: Float[Tensor, "N M"], mask: Optional[Bool[Tensor, "N M"]] = None
) -> Float[Tensor, "N M"]:
    r"""
    Row-wise softmax with an optional mask of admissible entries.

    Entries where :attr:`mask` is False get exactly zero weight; every other row entry is
    :math:`\exp(m_{ij} - \max_k m_{ik}) / \sum_k \exp(m_{ik} - \max_k m_{ik})` over the admissible entries.

    :param m: Scores.
    :param mask: Boolean tensor of the same shape. True marks an admissible entry.
    :return: Row-stochastic matrix.
    """
    if mask is None:
        return torch.softmax(m, dim=-1)
    if mask.shape != m.shape:
        raise ValueError(f"mask has shape {tuple(mask.shape)} but scores have shape {tuple(m.shape)}")
    if m.size(-1) > 0 and not bool(mask.any(dim=-1).all()):
        raise ValueError("softmax_rows received a row whose entries are all masked")
    # the row max of the admissible entries keeps exp() in range
    scores = m.masked_fill(~mask, float("-inf"))
    return torch.softmax(scores, dim=-1).masked_fill(~mask, 0.0)
