#!/usr/bin/env python3

import unittest

import torch
from linear_operator.utils.errors import NotPSDError

from icftorch.bandits import PmfModel, PmfPosterior, posterior_from_history, posterior_update
from icftorch.functions import cholesky
from icftorch.test import BaseTestCase


class TestPosteriorUpdate(BaseTestCase, unittest.TestCase):
    seed = 0

    def test_unit_vector(self):
        prior = PmfPosterior.prior(2, 1.0)
        post = posterior_update(prior, torch.tensor([1.0, 0.0], dtype=torch.float64), 3.0, 1.0)
        self.assertAllClose(post.cov, torch.diag(torch.tensor([0.5, 1.0], dtype=torch.float64)), atol=1e-12)
        self.assertAllClose(post.mean, torch.tensor([1.5, 0.0], dtype=torch.float64), atol=1e-12)

    def test_zero_vector_is_uninformative(self):
        prior = PmfPosterior(torch.tensor([0.3, -0.1], dtype=torch.float64), torch.eye(2, dtype=torch.float64) * 2)
        post = posterior_update(prior, torch.zeros(2, dtype=torch.float64), 5.0, 0.25)
        self.assertAllClose(post.mean, prior.mean, atol=1e-12)
        self.assertAllClose(post.cov, prior.cov, atol=1e-12)

    def test_repeated_updates_add_precision(self):
        nu = torch.tensor([0.6, -1.2, 0.4], dtype=torch.float64)
        post = PmfPosterior.prior(3)
        for _ in range(2):
            post = posterior_update(post, nu, 1.0, 0.5)
        expected = torch.linalg.inv(torch.eye(3, dtype=torch.float64) + 2 * torch.outer(nu, nu) / 0.5)
        self.assertAllClose(post.cov, expected, rtol=1e-10, atol=1e-12)

    def test_uncertainty_shrinks(self):
        generator = torch.Generator().manual_seed(0)
        post = PmfPosterior.prior(4)
        for _ in range(50):
            nu = torch.randn(4, generator=generator, dtype=torch.float64)
            new = posterior_update(post, nu, float(torch.randn((), generator=generator)), 0.3)
            cholesky(post.cov - new.cov + 1e-9 * torch.eye(4, dtype=torch.float64))
            self.assertLessEqual((nu @ new.cov @ nu).item(), (nu @ post.cov @ nu).item() + 1e-12)
            post = new

    def test_singular_covariance(self):
        singular = PmfPosterior(torch.zeros(2, dtype=torch.float64), torch.zeros(2, 2, dtype=torch.float64))
        with self.assertRaises(NotPSDError):
            posterior_update(singular, torch.ones(2, dtype=torch.float64), 1.0, 1.0)

    def test_dimension_mismatch(self):
        with self.assertRaises(ValueError):
            posterior_update(PmfPosterior.prior(2), torch.ones(3, dtype=torch.float64), 1.0, 1.0)


class TestPosteriorFromHistory(BaseTestCase, unittest.TestCase):
    seed = 0

    def test_empty_history_is_prior(self):
        model = PmfModel(5, 3, prior_var=2.0)
        post = posterior_from_history(model, [])
        self.assertTrue(torch.equal(post.mean, torch.zeros(3, dtype=torch.float64)))
        self.assertTrue(torch.equal(post.cov, 2.0 * torch.eye(3, dtype=torch.float64)))

    def test_matches_sequential_updates(self):
        model = PmfModel(8, 3, noise_var=0.3, prior_var=1.5, seed=2)
        history = [(4, 5), (0, 2), (7, 3), (1, 4)]
        sequential = PmfPosterior.prior(3, 1.5)
        for item, rating in history:
            sequential = posterior_update(sequential, model.item_means[item], rating, 0.3)
        batch = posterior_from_history(model, history)
        self.assertAllClose(batch.mean, sequential.mean, rtol=1e-9, atol=1e-12)
        self.assertAllClose(batch.cov, sequential.cov, rtol=1e-9, atol=1e-12)


if __name__ == "__main__":
    unittest.main()
