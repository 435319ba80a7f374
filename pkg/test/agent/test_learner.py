#!/usr/bin/env python3

import os
import tempfile
import unittest

import torch

from icftorch.agent import compute_target, evaluate, GreedyQPolicy, td_update, train, TrainConfig, Transition
from icftorch.data import env_reset, env_step, split_users, UserSplit
from icftorch.models import load_checkpoint, QNetwork, SupportState
from icftorch.test import BaseTestCase
from icftorch.test.utils import all_train_split, log_from_matrix, random_log
from icftorch.utils.errors import ConfigError


def constant_network(num_items: int, q) -> QNetwork:
    qnet = QNetwork(num_items, 2, 1)
    with torch.no_grad():
        for param in qnet.parameters():
            param.zero_()
        qnet.policy_bias2.copy_(torch.tensor(q, dtype=torch.float64))
    return qnet


def exact_q_values(log, user, horizon, gamma):
    """Finite-horizon value iteration over the episode tree: ``(state, {item: Q})`` for every non-terminal state."""
    tree = []

    def solve(state):
        values = {}
        for item in sorted(state.remaining):
            _, satisfied, next_state, done = env_step(log, state, item)
            values[item] = satisfied if done else satisfied + gamma * max(solve(next_state).values())
        tree.append((state, values))
        return values

    solve(env_reset(log, user, horizon))
    return tree


class TestComputeTarget(BaseTestCase, unittest.TestCase):
    seed = 0

    def setUp(self):
        super().setUp()
        self.qnet = constant_network(3, [2.0, 5.0, 1.0])
        self.state = SupportState.empty()

    def test_bootstrap_over_valid_items(self):
        tr = Transition(self.state, 1, 1.0, self.state.append(1, 3), False, frozenset({0, 2}))
        self.assertAlmostEqual(compute_target(tr, self.qnet, 0.5), 2.0)

    def test_terminal(self):
        tr = Transition(self.state, 1, 1.0, self.state.append(1, 5), True, frozenset({0, 2}))
        self.assertEqual(compute_target(tr, self.qnet, 0.9), 1.0)

    def test_zero_discount(self):
        tr = Transition(self.state, 1, 0.0, self.state.append(1, 3), False, frozenset({0, 2}))
        self.assertEqual(compute_target(tr, self.qnet, 0.0), 0.0)

    def test_non_terminal_without_valid_items(self):
        tr = Transition(self.state, 1, 1.0, self.state.append(1, 3), False, frozenset())
        with self.assertRaises(ValueError):
            compute_target(tr, self.qnet, 0.5)


class TestTdUpdate(BaseTestCase, unittest.TestCase):
    seed = 0

    def _batch(self, qnet, n=6):
        generator = torch.Generator().manual_seed(3)
        batch = []
        for k in range(n):
            items = torch.randperm(qnet.num_items, generator=generator)[:4].tolist()
            state = SupportState.empty()
            for item in items[:2]:
                state = state.append(item, int(torch.randint(1, 6, (), generator=generator)))
            reward = float(k % 2)
            batch.append(Transition(state, items[2], reward, state.append(items[2], 4), False, frozenset(items[3:])))
        return batch

    def test_fixed_point(self):
        qnet = QNetwork(6, 4, 2, seed=1)
        state = SupportState.empty().append(2, 4)
        current = qnet.q_value(state, 3)
        before = {name: p.detach().clone() for name, p in qnet.named_parameters()}
        optimizer = torch.optim.Adam(qnet.parameters(), lr=1e-2)
        loss = td_update([Transition(state, 3, current, state.append(3, 1), True, frozenset())], qnet, 0.9, optimizer)
        self.assertEqual(loss, 0.0)
        for name, p in qnet.named_parameters():
            self.assertTrue(torch.equal(p.detach(), before[name]))

    def test_zero_discount_is_supervised_regression(self):
        qnet = QNetwork(8, 4, 2, seed=2)
        batch = self._batch(qnet)
        reference = qnet.clone()
        loss = sum((reference(tr.state)[tr.action] - tr.reward) ** 2 for tr in batch) / len(batch)
        loss.backward()
        td_loss = td_update(batch, qnet, 0.0, torch.optim.SGD(qnet.parameters(), lr=0.0))
        self.assertAlmostEqual(td_loss, loss.item(), places=12)
        for (name, p), (_, ref) in zip(qnet.named_parameters(), reference.named_parameters()):
            self.assertAllClose(p.grad, ref.grad, rtol=1e-9, atol=1e-12)

    def test_single_transition_regression_converges(self):
        qnet = QNetwork(5, 4, 1, seed=3)
        state = SupportState.empty().append(0, 5).append(4, 2)
        tr = Transition(state, 1, 1.0, state.append(1, 4), False, frozenset({2, 3}))
        optimizer = torch.optim.SGD(qnet.parameters(), lr=0.01)
        errors = []
        for _ in range(1000):
            td_update([tr], qnet, 0.0, optimizer)
            errors.append(abs(qnet.q_value(state, 1) - 1.0))
            if errors[-1] < 1e-3:
                break
        self.assertLess(errors[-1], 1e-3)
        self.assertTrue(all(b <= a + 1e-12 for a, b in zip(errors, errors[1:])))

    def test_empty_batch(self):
        qnet = QNetwork(5, 4, 1)
        with self.assertRaises(ValueError):
            td_update([], qnet, 0.5, torch.optim.SGD(qnet.parameters(), lr=0.1))


class TestTrain(BaseTestCase, unittest.TestCase):
    seed = 0

    def _config(self, **kwargs):
        defaults = dict(
            epochs=2, horizon=5, batch_size=4, learning_rate=1e-2, embedding_dim=4, num_blocks=1, episodes_per_epoch=4
        )
        defaults.update(kwargs)
        return TrainConfig(**defaults)

    def test_config_validation(self):
        for kwargs in ({"epochs": 0}, {"eta": 0.0}, {"horizon": 0}, {"reward_mode": "ratings"}, {"epsilon_end": 2.0}):
            with self.assertRaises(ConfigError):
                TrainConfig(**kwargs)

    def test_single_epoch_smoke(self):
        log = random_log(n_users=10, n_items=6, seed=1)
        qnet, history = train(log, all_train_split(log), self._config(epochs=1))
        self.assertEqual(len(history), 1)
        self.assertEqual(history.to_frame()["epoch"].tolist(), [1])
        self.assertEqual(history.records[0].gamma, 1.0)
        self.assertGreater(history.records[0].updates, 0)
        self.assertEqual(qnet.num_items, 6)

    def test_deterministic(self):
        log = random_log(n_users=12, n_items=6, seed=2)
        split = split_users(log, (0.75, 0.25, 0.0), seed=0)
        config = self._config(epochs=3)
        first_net, first_log = train(log, split, config)
        second_net, second_log = train(log, split, config)
        self.assertTrue(first_log.to_frame().equals(second_log.to_frame()))
        for (_, p1), (_, p2) in zip(first_net.named_parameters(), second_net.named_parameters()):
            self.assertTrue(torch.equal(p1, p2))

    def test_validation_checkpoint_and_early_stop(self):
        log = random_log(n_users=12, n_items=6, seed=2)
        split = split_users(log, (0.75, 0.25, 0.0), seed=0)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "checkpoint.pt")
            qnet, history = train(log, split, self._config(epochs=6, patience=1), checkpoint_path=path)
            frame = history.to_frame()
            self.assertFalse(frame["precision@40"].isna().any())
            self.assertLessEqual(len(history), 6)
            best = history.best_epoch
            self.assertEqual(frame.loc[frame["epoch"] == best, "precision@40"].item(), frame["precision@40"].max())
            restored = load_checkpoint(path)
            for (_, p1), (_, p2) in zip(qnet.named_parameters(), restored.named_parameters()):
                self.assertTrue(torch.equal(p1, p2))
            history.to_csv(os.path.join(tmp, "training_log.csv"))
            with open(os.path.join(tmp, "training_log.csv")) as f:
                self.assertEqual(f.readline().strip(), ",".join(history.columns))

    def test_epsilon_reaches_end_with_short_episodes(self):
        log = random_log(n_users=6, n_items=8, seed=3)
        self.assertTrue(all(len(log.user_ratings(u)) < 40 for u in range(log.n_users)))
        _, history = train(log, all_train_split(log), self._config(epochs=3, horizon=40))
        epsilons = history.to_frame()["epsilon"].tolist()
        self.assertEqual(epsilons[-1], 0.0)
        self.assertGreater(epsilons[0], epsilons[1])
        self.assertGreater(epsilons[1], epsilons[2])

    def test_toy_mdp_learns_optimal_policy(self):
        # one user rating items [5, 2, 4]; over two steps the best policy serves both satisfied items
        log = log_from_matrix([{0: 5, 1: 2, 2: 4}])
        split = UserSplit(frozenset({0}), frozenset(), frozenset(), seed=0)
        config = TrainConfig(
            epochs=200,
            horizon=2,
            batch_size=16,
            learning_rate=5e-3,
            embedding_dim=8,
            num_blocks=1,
            episodes_per_epoch=15,
            target_sync_interval=20,
            seed=0,
        )
        qnet, history = train(log, split, config)
        self.assertEqual(len(history), 200)
        self.assertEqual(history.records[-1].gamma, 1.0)
        self.assertEqual(history.records[-1].epsilon, 0.0)

        tree = exact_q_values(log, 0, horizon=2, gamma=1.0)
        self.assertEqual(len(tree), 4)
        for state, exact in tree:
            with self.subTest(state=state.history):
                q = qnet(state.history).detach()
                valid = sorted(exact)
                greedy = valid[int(q[valid].argmax())]
                self.assertEqual(exact[greedy], max(exact.values()))
                if state.step == state.horizon:
                    for item, value in exact.items():
                        self.assertLess(abs(q[item].item() - value), 1e-2)
        result = evaluate(GreedyQPolicy(qnet), log, [0], horizon=2, cutoffs=(2,))
        self.assertEqual(result.traces[0].satisfied, (1, 1))


if __name__ == "__main__":
    unittest.main()
