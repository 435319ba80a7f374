#!/usr/bin/env python3

import io
import unittest

from icftorch.cli import demo_session
from icftorch.models import QNetwork
from icftorch.test import BaseTestCase


class TestDemoSession(BaseTestCase, unittest.TestCase):
    seed = 0

    def setUp(self):
        super().setUp()
        self.qnet = QNetwork(6, 4, 1, seed=0)
        self.titles = {i: f"Movie {i}" for i in range(6)}

    def _run(self, text, horizon=40):
        output = io.StringIO()
        result = demo_session(self.qnet, self.titles, io.StringIO(text), output, horizon=horizon)
        return result, output.getvalue()

    def test_two_ratings_then_quit(self):
        result, text = self._run("5\n3\nquit\n")
        self.assertEqual(result.steps, 2)
        self.assertEqual(result.precision, 1)
        self.assertIn("We recommend: Movie", text)
        self.assertIn("Goodbye. Steps: 2, precision: 1", text)
        self.assertEqual([r for _, r in result.state.history], [5, 3])

    def test_immediate_quit(self):
        result, text = self._run("quit\n")
        self.assertEqual(result.steps, 0)
        self.assertIn("Goodbye. Steps: 0, precision: 0", text)

    def test_end_of_input(self):
        result, _ = self._run("4\n")
        self.assertEqual((result.steps, result.precision), (1, 1))

    def test_invalid_rating_reprompts(self):
        result, text = self._run("7\nfive\n5\nquit\n")
        self.assertEqual(text.count("Please enter a whole number from 1 to 5."), 2)
        self.assertEqual(result.steps, 1)
        self.assertEqual(text.count("We recommend"), 2)

    def test_no_repeats_until_horizon(self):
        result, text = self._run("1\n" * 10, horizon=4)
        items = [item for item, _ in result.state.history]
        self.assertEqual(len(items), 4)
        self.assertEqual(len(set(items)), 4)
        self.assertIn("Session over. Steps: 4, precision: 0", text)


if __name__ == "__main__":
    unittest.main()
