#!/usr/bin/env python3

import unittest

import torch

from icftorch.bandits import eps_greedy_select, glm_ucb_select, PmfModel, PmfPosterior, thompson_select
from icftorch.test import BaseTestCase


def fixed_model(means, item_var=1e-12) -> PmfModel:
    means = torch.as_tensor(means, dtype=torch.float64)
    model = PmfModel(means.size(0), means.size(1))
    model.item_means.copy_(means)
    model.item_vars.fill_(item_var)
    return model


class TestSelectors(BaseTestCase, unittest.TestCase):
    seed = 0

    def setUp(self):
        super().setUp()
        generator = torch.Generator().manual_seed(0)
        self.model = fixed_model(torch.randn(12, 3, generator=generator, dtype=torch.float64))
        mean = torch.tensor([0.5, -1.0, 0.8], dtype=torch.float64)
        self.posterior = PmfPosterior(mean, 1e-12 * torch.eye(3, dtype=torch.float64))

    def _greedy(self, valid):
        scores = self.model.item_means @ self.posterior.mean
        return max(sorted(valid), key=lambda i: scores[i].item())

    def test_zero_uncertainty_limit(self):
        generator = torch.Generator().manual_seed(1)
        for valid in ({0, 1, 2, 3}, {4, 9, 11}, set(range(12))):
            greedy = self._greedy(valid)
            self.assertEqual(thompson_select(self.posterior, self.model, valid, generator), greedy)
            self.assertEqual(glm_ucb_select(self.posterior, self.model, valid, 0.5, 7), greedy)
            self.assertEqual(eps_greedy_select(self.posterior, self.model, valid, 0.0, generator), greedy)

    def test_singleton(self):
        wide = PmfPosterior.prior(3)
        generator = torch.Generator().manual_seed(2)
        for _ in range(20):
            self.assertEqual(thompson_select(wide, self.model, {5}, generator), 5)
            self.assertEqual(eps_greedy_select(wide, self.model, {5}, 1.0, generator), 5)
        self.assertEqual(glm_ucb_select(wide, self.model, {5}, 1.0, 10), 5)

    def test_thompson_symmetry(self):
        model = fixed_model([[1.0, 0.0], [1.0, 0.0]], item_var=1.0)
        posterior = PmfPosterior.prior(2)
        generator = torch.Generator().manual_seed(3)
        picks = [thompson_select(posterior, model, {0, 1}, generator) for _ in range(10000)]
        self.assertLess(abs(picks.count(0) / 10000 - 0.5), 0.02)

    def test_ucb_bonus(self):
        model = fixed_model([[0.0, 1.0], [0.0, 3.0], [0.0, 2.0]])
        posterior = PmfPosterior(torch.zeros(2, dtype=torch.float64), torch.eye(2, dtype=torch.float64))
        # equal means everywhere: the bonus picks the longest item vector for t >= 2
        self.assertEqual(glm_ucb_select(posterior, model, {0, 1, 2}, 0.1, 2), 1)
        # t = 1 and c = 0 leave ties, broken by the lowest id
        self.assertEqual(glm_ucb_select(posterior, model, {0, 1, 2}, 5.0, 1), 0)
        self.assertEqual(glm_ucb_select(posterior, model, {1, 2}, 0.0, 50), 1)

    def test_ucb_errors(self):
        with self.assertRaises(ValueError):
            glm_ucb_select(self.posterior, self.model, {0}, 0.1, 0)
        with self.assertRaises(ValueError):
            glm_ucb_select(self.posterior, self.model, {0}, -0.1, 3)
        with self.assertRaises(ValueError):
            glm_ucb_select(self.posterior, self.model, set(), 0.1, 3)
        with self.assertRaises(ValueError):
            thompson_select(self.posterior, self.model, set())

    def test_eps_greedy_uniform(self):
        generator = torch.Generator().manual_seed(4)
        picks = [eps_greedy_select(self.posterior, self.model, {3, 7}, 1.0, generator) for _ in range(10000)]
        self.assertEqual(set(picks), {3, 7})
        self.assertLess(abs(picks.count(3) / 10000 - 0.5), 0.02)

    def test_valid_mask(self):
        generator = torch.Generator().manual_seed(5)
        wide = PmfPosterior.prior(3)
        for k in range(300):
            valid = set(torch.randperm(12, generator=generator)[: k % 5 + 1].tolist())
            self.assertIn(thompson_select(wide, self.model, valid, generator), valid)
            self.assertIn(glm_ucb_select(wide, self.model, valid, 1.0, k + 1), valid)
            self.assertIn(eps_greedy_select(wide, self.model, valid, 0.5, generator), valid)


if __name__ == "__main__":
    unittest.main()
