#!/usr/bin/env python3

import math
from typing import Sequence, Union

import torch
from jaxtyping import Bool, Float
from torch import Tensor

from ..functions import softmax_rows


def embed_channel(
    embeddings: Float[Tensor, "I D"], items: Union[Sequence[int], Tensor]
) -> Float[Tensor, "N D"]:
    """Stacks the embeddings of :attr:`items` in order. An empty channel gives a ``0 x d`` matrix."""
    if not torch.is_tensor(items):
        items = torch.tensor(list(items), dtype=torch.long, device=embeddings.device)
    return embeddings.index_select(0, items)


def causal_mask(n_queries: int, n_keys: int, device=None) -> Bool[Tensor, "N M"]:
    """True where query ``i`` may attend to key ``j``, i.e. ``j <= i``."""
    return torch.ones(n_queries, n_keys, dtype=torch.bool, device=device).tril()


def attention_weights(
    C: Float[Tensor, "N D"], K: Float[Tensor, "M D"], causal: bool = True
) -> Float[Tensor, "N M"]:
    r"""Softmax of :math:`\mathbf C \mathbf K^\top / \sqrt d`, with later keys masked out when causal."""
    scores = C @ K.mT / math.sqrt(C.size(-1))
    mask = causal_mask(C.size(0), K.size(0), device=C.device) if causal else None
    return softmax_rows(scores, mask)


def attention(
    C: Float[Tensor, "N D"], K: Float[Tensor, "M D"], V: Float[Tensor, "M E"], causal: bool = True
) -> Float[Tensor, "N E"]:
    r"""
    Scaled dot-product attention

    .. math::
        \text{softmax}\left( \frac{\mathbf C \mathbf K^\top}{\sqrt d} \right) \mathbf V

    where :math:`d` is the number of columns of :attr:`C`. With :attr:`causal`, position :math:`i`
    only attends to positions :math:`j \le i`.
    """
    if C.size(-1) != K.size(-1):
        raise ValueError(f"queries and keys differ in width: {C.size(-1)} vs {K.size(-1)}")
    if K.size(0) != V.size(0):
        raise ValueError(f"keys and values differ in length: {K.size(0)} vs {V.size(0)}")
    return attention_weights(C, K, causal) @ V


def ffn(
    x: Float[Tensor, "... D"],
    weight1: Float[Tensor, "D D"],
    bias1: Float[Tensor, "D"],
    weight2: Float[Tensor, "D D"],
    bias2: Float[Tensor, "D"],
) -> Float[Tensor, "... D"]:
    r"""
    Point-wise feed-forward layer

    .. math::
        \text{ReLU}(\mathbf x \mathbf W^{(1)} + \mathbf b^{(1)}) \mathbf W^{(2)} + \mathbf b^{(2)}.
    """
    return torch.relu(ffn_preactivation(x, weight1, bias1)) @ weight2 + bias2


def ffn_preactivation(x: Tensor, weight1: Tensor, bias1: Tensor) -> Tensor:
    return x @ weight1 + bias1


def relu_mask(x: Tensor) -> Tensor:
    """Derivative of ReLU, taken as 0 at exactly 0."""
    return (x > 0).to(x.dtype)


__all__ = ["attention", "attention_weights", "causal_mask", "embed_channel", "ffn", "relu_mask"]
