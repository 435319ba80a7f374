#!/usr/bin/env python3

import unittest

import torch

from icftorch import settings
from icftorch.agent import evaluate, GreedyQPolicy, rollout
from icftorch.bandits import RandomPolicy
from icftorch.models import QNetwork
from icftorch.test import BaseTestCase
from icftorch.test.utils import log_from_matrix, random_log


def lowest_remaining(state, generator=None):
    return min(state.remaining)


class TestEvaluate(BaseTestCase, unittest.TestCase):
    seed = 0

    def test_scripted_ratings(self):
        log = log_from_matrix([{0: 5, 1: 3, 2: 4, 3: 2}])
        trace = rollout(lowest_remaining, log, 0, horizon=4)
        self.assertEqual(trace.satisfied, (1, 0, 1, 0))
        result = evaluate(lowest_remaining, log, [0], horizon=4, cutoffs=(4,))
        self.assertEqual(result.precision_at(4), 2.0)
        self.assertEqual(result.table["T"].tolist(), [4])

    def test_oracle_policy(self):
        log = log_from_matrix([{i: 5 if i % 2 == 0 else 1 for i in range(12)}])

        def oracle(state, generator=None):
            ratings = log.user_ratings(state.user_id)
            return max(state.remaining, key=lambda i: (ratings[i], -i))

        result = evaluate(oracle, log, [0], horizon=5, cutoffs=(5,))
        self.assertEqual(result.precision_at(5), 5.0)

    def test_user_without_satisfied_items(self):
        log = log_from_matrix([{0: 1, 1: 2, 2: 3}])
        result = evaluate(RandomPolicy(), log, [0], horizon=3, cutoffs=(3,))
        self.assertEqual(result.precision_at(3), 0.0)
        self.assertEqual(result.table["recall"].item(), 0.0)

    def test_curves_cover_all_cutoffs(self):
        log = random_log(n_users=5, n_items=8, seed=1)
        result = evaluate(RandomPolicy(), log, range(5), horizon=6)
        self.assertEqual(len(result.curves), 40)
        self.assertEqual(result.table["T"].tolist(), [5, 10, 20, 40])
        self.assertTrue((result.curves["precision"].diff().dropna() >= 0).all())

    def test_deterministic_and_worker_independent(self):
        log = random_log(n_users=10, n_items=8, seed=2)
        qnet = QNetwork(log.n_items, 4, 1, seed=0)
        before = {name: p.detach().clone() for name, p in qnet.named_parameters()}
        policy = GreedyQPolicy(qnet, epsilon=0.3)
        first = evaluate(policy, log, range(10), horizon=6, seed=4)
        with settings.num_eval_workers(3):
            second = evaluate(policy, log, reversed(range(10)), horizon=6, seed=4)
        self.assertEqual(first.traces, second.traces)
        self.assertTrue(first.curves.equals(second.curves))
        for name, p in qnet.named_parameters():
            self.assertTrue(torch.equal(p.detach(), before[name]))

    def test_no_users(self):
        log = random_log(n_users=3, n_items=4)
        with self.assertRaises(ValueError):
            evaluate(RandomPolicy(), log, [])


if __name__ == "__main__":
    unittest.main()
