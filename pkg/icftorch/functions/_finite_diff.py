#!/usr/bin/env python3

import math
from typing import Callable, Optional

import torch
from jaxtyping import Float
from linear_operator.utils.errors import NanError
from torch import Tensor

from .. import settings


def finite_diff_grad(
    f: Callable[[Tensor], float], x: Float[Tensor, "N"], h: Optional[float] = None
) -> Float[Tensor, "N"]:
    r"""
    Central-difference gradient :math:`(f(x + h e_i) - f(x - h e_i)) / 2h` of a scalar function.

    Used as the reference oracle for hand-derived gradients.

    :param f: Scalar function of a vector. May return a float or a 0-d tensor.
    :param x: Point of evaluation (not modified).
    :param h: Step. Defaults to :func:`icftorch.settings.finite_difference_step`.
    :raises NanError: if an evaluation is not finite.
    """
    if h is None:
        h = settings.finite_difference_step.value()
    x = x.detach().clone()
    flat = x.view(-1)
    grad = torch.zeros_like(flat)
    for i in range(flat.numel()):
        orig = flat[i].item()
        flat[i] = orig + h
        f_plus = float(f(x))
        flat[i] = orig - h
        f_minus = float(f(x))
        flat[i] = orig
        if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
            raise NanError(f"finite_diff_grad: non-finite evaluation around coordinate {i}")
        grad[i] = (f_plus - f_minus) / (2 * h)
    return grad.view_as(x)
