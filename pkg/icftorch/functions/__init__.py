#!/usr/bin/env python3

from ._finite_diff import finite_diff_grad
from ._linalg import cholesky, sample_gaussian
from ._sigmoid import sigmoid
from ._softmax import softmax_rows

__all__ = [
    "cholesky",
    "finite_diff_grad",
    "sample_gaussian",
    "sigmoid",
    "softmax_rows",
]
