#!/usr/bin/env python3

import math
import unittest

import torch

from icftorch.models.blocks import attention, causal_mask, embed_channel, ffn
from icftorch.test import BaseTestCase


class TestBlocks(BaseTestCase, unittest.TestCase):
    seed = 0

    def test_embed_empty_channel(self):
        A = torch.randn(10, 4, dtype=torch.float64)
        self.assertEqual(embed_channel(A, []).shape, torch.Size([0, 4]))

    def test_embed_lookup(self):
        A = torch.randn(10, 4, dtype=torch.float64)
        self.assertTrue(torch.equal(embed_channel(A, [7]), A[7:8]))
        self.assertTrue(torch.equal(embed_channel(A, [3, 1]), A[[3, 1]]))

    def test_single_key_returns_value(self):
        x = torch.randn(1, 3, dtype=torch.float64)
        self.assertTrue(torch.equal(attention(x, x, x), x))

    def test_identity_non_causal(self):
        eye = torch.eye(2, dtype=torch.float64)
        out = attention(eye, eye, eye, causal=False)
        e = math.exp(1 / math.sqrt(2))
        expected = torch.tensor([[e / (e + 1), 1 / (e + 1)], [1 / (e + 1), e / (e + 1)]], dtype=torch.float64)
        self.assertAllClose(out, expected, rtol=1e-12, atol=1e-14)

    def test_causal_first_row(self):
        C, K, V = (torch.randn(2, 3, dtype=torch.float64) for _ in range(3))
        out = attention(C, K, V, causal=True)
        self.assertAllClose(out[0], V[0], rtol=1e-12, atol=1e-14)

    def test_causal_mask(self):
        self.assertEqual(causal_mask(3, 3).tolist(), [[True, False, False], [True, True, False], [True, True, True]])

    def test_shape_errors(self):
        with self.assertRaises(ValueError):
            attention(torch.zeros(2, 3), torch.zeros(2, 4), torch.zeros(2, 3))
        with self.assertRaises(ValueError):
            attention(torch.zeros(2, 3), torch.zeros(2, 3), torch.zeros(3, 3))

    def test_ffn(self):
        d = 4
        zeros, eye = torch.zeros(d, d, dtype=torch.float64), torch.eye(d, dtype=torch.float64)
        bias = torch.zeros(d, dtype=torch.float64)
        x = torch.rand(d, dtype=torch.float64) + 0.1
        self.assertTrue(torch.equal(ffn(x, zeros, bias, zeros, bias), bias))
        self.assertAllClose(ffn(x, eye, bias, eye, bias), x)
        b2 = torch.randn(d, dtype=torch.float64)
        self.assertAllClose(ffn(-x, eye, bias, eye, b2), b2)


if __name__ == "__main__":
    unittest.main()
