#!/usr/bin/env python3

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import torch
from jaxtyping import Float
from torch import Tensor
from torch.nn import Parameter

from .. import settings
from ..module import Module
from ..utils.errors import StaleCacheError
from .blocks import attention_weights, embed_channel, ffn_preactivation, relu_mask
from .support_state import SupportState


@dataclass
class BlockCache:
    x: Tensor  # block input (E^z or the previous F)
    c: Tensor
    k: Tensor
    v: Tensor
    p: Tensor  # attention weights
    s: Tensor
    h: Tensor  # FFN pre-activation
    f: Tensor


@dataclass
class ChannelCache:
    items: Tensor
    blocks: List[BlockCache]


@dataclass
class ForwardCache:
    """Activations of one :meth:`QNetwork.forward` evaluation, consumed by :meth:`QNetwork.backward`."""

    channels: List[ChannelCache]
    u: Tensor  # concatenated channel readouts
    a: Tensor  # policy hidden pre-activation
    q: Tensor
    signature: Tuple[int, int, int, int]


class QNetwork(Module):
    r"""
    Multi-channel stacked self-attention Q-network.

    The support set :math:`s_t` is split by rating score :math:`z \in \{1, \dots, R\}`. Each channel is
    embedded with the shared item embedding matrix :math:`\mathbf A` and passed through :math:`b` blocks of

    .. math::
        \mathbf S = \text{softmax}\left( \frac{\mathbf X \mathbf W^{z,c} (\mathbf X \mathbf W^{z,k})^\top}{\sqrt d}
        \right) \mathbf X \mathbf W^{z,v}, \qquad
        \mathbf F = \text{ReLU}(\mathbf S \mathbf W^{(1)} + \mathbf b^{(1)}) \mathbf W^{(2)} + \mathbf b^{(2)},

    with causal masking. The last row of every channel's final :math:`\mathbf F` (zeros for an empty channel)
    is concatenated into :math:`\mathbf u_t \in \mathbb R^{Rd}` and mapped by a two-layer policy network to
    :math:`Q_\theta(s_t, \cdot) \in \mathbb R^{|I|}`.

    There are no residual connections, normalization layers or positional encodings.

    :param num_items: Number of items :math:`|I|`.
    :param embedding_dim: Latent dimension :math:`d`.
    :param num_blocks: Number of stacked self-attention blocks :math:`b` per channel.
    :param max_rating: Number of rating channels :math:`R`.
    :param seed: Seed of the initialization (weights uniform in :math:`[-1/\sqrt d, 1/\sqrt d]`, zero biases).

    Example:
        >>> qnet = QNetwork(num_items=3706, embedding_dim=30, num_blocks=2)
        >>> q, cache = qnet.forward(SupportState.empty())
        >>> grads = qnet.backward(cache, selected_item=int(q.argmax()), upstream=1.0)
    """

    hyperparameter_names = ("num_items", "embedding_dim", "num_blocks", "max_rating")

    def __init__(
        self, num_items: int, embedding_dim: int = 30, num_blocks: int = 2, max_rating: int = 5, seed: int = 0
    ):
        super().__init__()
        if min(num_items, embedding_dim, num_blocks, max_rating) < 1:
            raise ValueError("num_items, embedding_dim, num_blocks and max_rating must all be positive")
        self.num_items = num_items
        self.embedding_dim = embedding_dim
        self.num_blocks = num_blocks
        self.max_rating = max_rating

        dtype = settings.dtype.value()
        generator = torch.Generator().manual_seed(seed)
        bound = 1.0 / math.sqrt(embedding_dim)

        def uniform(*shape):
            return Parameter((torch.rand(*shape, generator=generator, dtype=dtype) * 2 - 1) * bound)

        d, b, R = embedding_dim, num_blocks, max_rating
        self.register_parameter("item_embeddings", uniform(num_items, d))
        self.register_parameter("query_weights", uniform(R, b, d, d))
        self.register_parameter("key_weights", uniform(R, b, d, d))
        self.register_parameter("value_weights", uniform(R, b, d, d))
        self.register_parameter("ffn_weights1", uniform(R, b, d, d))
        self.register_parameter("ffn_biases1", Parameter(torch.zeros(R, b, d, dtype=dtype)))
        self.register_parameter("ffn_weights2", uniform(R, b, d, d))
        self.register_parameter("ffn_biases2", Parameter(torch.zeros(R, b, d, dtype=dtype)))
        self.register_parameter("policy_weight1", uniform(R * d, d))
        self.register_parameter("policy_bias1", Parameter(torch.zeros(d, dtype=dtype)))
        self.register_parameter("policy_weight2", uniform(d, num_items))
        self.register_parameter("policy_bias2", Parameter(torch.zeros(num_items, dtype=dtype)))

    @property
    def signature(self) -> Tuple[int, int, int, int]:
        return (self.num_items, self.embedding_dim, self.num_blocks, self.max_rating)

    def channel_features(self, state: SupportState, z: int) -> Tuple[Float[Tensor, "N D"], ChannelCache]:
        """Runs the block stack of channel ``z`` (1-based) and returns its final feature matrix."""
        items = torch.tensor(state.channel(z), dtype=torch.long, device=self.item_embeddings.device)
        x = embed_channel(self.item_embeddings, items)
        blocks = []
        for ell in range(self.num_blocks):
            c = x @ self.query_weights[z - 1, ell]
            k = x @ self.key_weights[z - 1, ell]
            v = x @ self.value_weights[z - 1, ell]
            p = attention_weights(c, k, causal=True)
            s = p @ v
            h = ffn_preactivation(s, self.ffn_weights1[z - 1, ell], self.ffn_biases1[z - 1, ell])
            f = torch.relu(h) @ self.ffn_weights2[z - 1, ell] + self.ffn_biases2[z - 1, ell]
            blocks.append(BlockCache(x, c, k, v, p, s, h, f))
            x = f
        return x, ChannelCache(items, blocks)

    def forward(self, state: SupportState) -> Tuple[Float[Tensor, "I"], ForwardCache]:
        """
        Computes :math:`Q_\\theta(s_t, \\cdot)` for every item.

        :return: The Q-vector and the activations needed by :meth:`backward`.
        """
        if state.max_rating != self.max_rating:
            raise ValueError(f"state has {state.max_rating} rating channels, network has {self.max_rating}")
        readouts = []
        channels = []
        for z in range(1, self.max_rating + 1):
            features, channel = self.channel_features(state, z)
            if features.size(0):
                readouts.append(features[-1])
            else:
                readouts.append(torch.zeros(self.embedding_dim, dtype=self.policy_bias1.dtype))
            channels.append(channel)
        u = torch.cat(readouts)
        a = u @ self.policy_weight1 + self.policy_bias1
        q = torch.relu(a) @ self.policy_weight2 + self.policy_bias2
        return q, ForwardCache(channels, u, a, q, self.signature)

    def __call__(self, state: SupportState) -> Float[Tensor, "I"]:
        return self.forward(state)[0]

    def _check_cache(self, cache: ForwardCache) -> None:
        if cache.signature != self.signature:
            raise StaleCacheError(f"cache was produced by a network of shape {cache.signature}, not {self.signature}")
        if cache.q.shape != self.policy_bias2.shape or cache.u.numel() != self.max_rating * self.embedding_dim:
            raise StaleCacheError("cache activations do not match the network's parameter shapes")

    def backward(self, cache: ForwardCache, selected_item: int, upstream: float = 1.0) -> Dict[str, Tensor]:
        """
        Analytic gradient of :math:`Q_\\theta(s, i_{sel})` with respect to every parameter, scaled by :attr:`upstream`.

        Only embedding rows of items present in the state and column :attr:`selected_item` of the output layer
        receive nonzero gradient.

        :param cache: Cache returned by :meth:`forward` with the current parameters.
        :return: Gradients keyed by parameter name.
        :raises StaleCacheError: if the cache does not belong to this network's shapes.
        """
        if settings.validate_cache.on():
            self._check_cache(cache)
        if not 0 <= selected_item < self.num_items:
            raise IndexError(f"selected_item {selected_item} outside [0, {self.num_items})")

        with torch.no_grad():
            grads = self.zero_grad_like()
            d = self.embedding_dim
            scale = 1.0 / math.sqrt(d)

            hidden = cache.a.clamp_min(0.0)
            grads["policy_weight2"][:, selected_item] = hidden * upstream
            grads["policy_bias2"][selected_item] = upstream
            da = self.policy_weight2[:, selected_item] * upstream * relu_mask(cache.a)
            grads["policy_weight1"] = torch.outer(cache.u, da)
            grads["policy_bias1"] = da
            du = self.policy_weight1 @ da

            for z, channel in enumerate(cache.channels):
                n = channel.items.numel()
                if n == 0:
                    continue
                dx = torch.zeros(n, d, dtype=du.dtype, device=du.device)
                dx[-1] = du[z * d : (z + 1) * d]
                for ell in reversed(range(self.num_blocks)):
                    blk = channel.blocks[ell]
                    grads["ffn_weights2"][z, ell] = blk.h.clamp_min(0.0).mT @ dx
                    grads["ffn_biases2"][z, ell] = dx.sum(0)
                    dh = (dx @ self.ffn_weights2[z, ell].mT) * relu_mask(blk.h)
                    grads["ffn_weights1"][z, ell] = blk.s.mT @ dh
                    grads["ffn_biases1"][z, ell] = dh.sum(0)
                    ds = dh @ self.ffn_weights1[z, ell].mT
                    dp = ds @ blk.v.mT
                    dv = blk.p.mT @ ds
                    # softmax Jacobian; masked weights are 0 and stay 0
                    dscores = blk.p * (dp - (dp * blk.p).sum(-1, keepdim=True)) * scale
                    dc = dscores @ blk.k
                    dk = dscores.mT @ blk.c
                    grads["query_weights"][z, ell] = blk.x.mT @ dc
                    grads["key_weights"][z, ell] = blk.x.mT @ dk
                    grads["value_weights"][z, ell] = blk.x.mT @ dv
                    dx = (
                        dc @ self.query_weights[z, ell].mT
                        + dk @ self.key_weights[z, ell].mT
                        + dv @ self.value_weights[z, ell].mT
                    )
                grads["item_embeddings"].index_add_(0, channel.items, dx)
        return grads

    def q_value(self, state: SupportState, item: int) -> float:
        return float(self.forward(state)[0][item])

    def copy_from(self, other: QNetwork) -> None:
        """Overwrites this network's parameters with those of :attr:`other` (same shapes)."""
        if other.signature != self.signature:
            raise ValueError(f"cannot copy a {other.signature} network into a {self.signature} network")
        with torch.no_grad():
            for (name, param), (_, src) in zip(self.named_parameters(), other.named_parameters()):
                param.copy_(src)

    def clone(self, seed: Optional[int] = None) -> QNetwork:
        new = QNetwork(*self.signature, seed=0 if seed is None else seed)
        new.copy_from(self)
        return new
