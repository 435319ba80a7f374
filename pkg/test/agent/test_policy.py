#!/usr/bin/env python3

import unittest

import torch

from icftorch.agent import GreedyQPolicy, select_action
from icftorch.models import QNetwork
from icftorch.test import BasePolicyTestCase, BaseTestCase


class TestSelectAction(BaseTestCase, unittest.TestCase):
    seed = 0

    def test_argmax(self):
        q = torch.tensor([1.0, 3.0, 2.0], dtype=torch.float64)
        self.assertEqual(select_action(q, {0, 1, 2}, 0.0), 1)
        self.assertEqual(select_action(q, {0, 2}, 0.0), 2)

    def test_ties_go_to_lowest_id(self):
        q = torch.tensor([0.0, 2.0, 1.0, 2.0], dtype=torch.float64)
        self.assertEqual(select_action(q, {3, 1, 0}, 0.0), 1)

    def test_uniform_exploration(self):
        generator = torch.Generator().manual_seed(0)
        q = torch.zeros(3, dtype=torch.float64)
        picks = [select_action(q, {0, 2}, 1.0, generator) for _ in range(10000)]
        self.assertEqual(set(picks), {0, 2})
        self.assertLess(abs(picks.count(0) / 10000 - 0.5), 0.02)

    def test_never_returns_invalid_item(self):
        generator = torch.Generator().manual_seed(1)
        q = torch.randn(50, dtype=torch.float64)
        for k in range(100000):
            if k % 1000 == 0:
                perm = torch.randperm(50, generator=generator)
                valid = frozenset(perm[: int(perm[0]) % 10 + 1].tolist())
                epsilon = float(torch.rand((), generator=generator))
            self.assertIn(select_action(q, valid, epsilon, generator), valid)

    def test_errors(self):
        q = torch.zeros(3, dtype=torch.float64)
        with self.assertRaises(ValueError):
            select_action(q, set(), 0.5)
        with self.assertRaises(ValueError):
            select_action(q, {0}, 1.5)


class TestGreedyQPolicy(BasePolicyTestCase, unittest.TestCase):
    seed = 0

    def create_policy(self, log):
        return GreedyQPolicy(QNetwork(log.n_items, 4, 1, log.max_rating, seed=2), epsilon=0.2)


if __name__ == "__main__":
    unittest.main()
