#!/usr/bin/env python3

import unittest

import numpy as np

from icftorch.data import TopicCatalog
from icftorch.metrics import EpisodeTrace, metric_curves, metric_table
from icftorch.test import BaseTestCase


class TestReport(BaseTestCase, unittest.TestCase):
    seed = 0

    def setUp(self):
        super().setUp()
        self.traces = [
            EpisodeTrace.from_steps(0, [(1, 5), (2, 3), (3, 4)]),
            EpisodeTrace.from_steps(1, [(3, 2), (1, 4)]),
        ]
        self.counts = {0: 2, 1: 1}

    def test_curves(self):
        curves = metric_curves(self.traces, self.counts, 4)
        self.assertEqual(list(curves.columns), ["T", "precision", "recall", "alpha_ndcg"])
        self.assertEqual(curves["T"].tolist(), [1, 2, 3, 4])
        self.assertEqual(curves["precision"].tolist(), [0.5, 1.0, 1.5, 1.5])
        self.assertTrue(curves["alpha_ndcg"].isna().all())

    def test_curves_with_catalog(self):
        catalog = TopicCatalog.from_pairs([(1, "A"), (2, "A"), (3, "B")])
        curves = metric_curves(self.traces, self.counts, 3, catalog)
        self.assertFalse(curves["alpha_ndcg"].isna().any())
        self.assertTrue(np.all(curves["alpha_ndcg"].to_numpy() <= 1.0 + 1e-12))

    def test_table(self):
        table = metric_table(self.traces, self.counts, cutoffs=(1, 3))
        self.assertEqual(table["T"].tolist(), [1, 3])
        self.assertEqual(table["recall"].tolist()[1], (2 / 2 + 1 / 1) / 2)
        with self.assertRaises(ValueError):
            metric_table(self.traces, self.counts, cutoffs=())


if __name__ == "__main__":
    unittest.main()
