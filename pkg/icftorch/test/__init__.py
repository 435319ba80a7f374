#!/usr/bin/env python3

from gpytorch.test.base_test_case import BaseTestCase

from . import utils
from .base_policy_test_case import BasePolicyTestCase

__all__ = [
    "BasePolicyTestCase",
    "BaseTestCase",
    "utils",
]
